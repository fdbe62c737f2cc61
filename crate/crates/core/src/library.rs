//! Built-in triangulations.

use crate::complex::SimplicialComplex;

/// Boundary of the (n+1)-simplex: an n-sphere on n+2 vertices.
pub fn boundary_of_simplex(n: usize) -> SimplicialComplex {
    let tops = (0..=n + 1)
        .map(|skip| (0..=n + 1).filter(|&v| v != skip).collect())
        .collect();
    SimplicialComplex::from_top_simplices(n, tops).expect("valid sphere")
}

/// Boundary of the 5-simplex, oriented.
pub fn s4() -> SimplicialComplex {
    oriented(boundary_of_simplex(4))
}

pub fn point() -> SimplicialComplex {
    oriented(SimplicialComplex::from_top_simplices(0, vec![vec![0]]).expect("valid point"))
}

/// The single edge `[0, 1]`.
pub fn interval() -> SimplicialComplex {
    SimplicialComplex::from_top_simplices(1, vec![vec![0, 1]]).expect("valid edge")
}

/// Cycle on `m ≥ 3` vertices, oriented.
pub fn circle(m: usize) -> SimplicialComplex {
    let tops = (0..m).map(|i| vec![i, (i + 1) % m]).collect();
    oriented(SimplicialComplex::from_top_simplices(1, tops).expect("valid cycle"))
}

/// Kühnel's 9-vertex complex projective plane, oriented.
pub fn cp2_9() -> SimplicialComplex {
    const FACETS: [[usize; 5]; 36] = [
        [1, 2, 3, 4, 5],
        [1, 2, 3, 4, 7],
        [1, 2, 3, 5, 8],
        [1, 2, 3, 7, 8],
        [1, 2, 4, 5, 6],
        [1, 2, 4, 6, 7],
        [1, 2, 5, 6, 8],
        [1, 2, 6, 7, 9],
        [1, 2, 6, 8, 9],
        [1, 2, 7, 8, 9],
        [1, 3, 4, 5, 9],
        [1, 3, 4, 7, 8],
        [1, 3, 4, 8, 9],
        [1, 3, 5, 6, 8],
        [1, 3, 5, 6, 9],
        [1, 3, 6, 8, 9],
        [1, 4, 5, 6, 7],
        [1, 4, 5, 7, 9],
        [1, 4, 7, 8, 9],
        [1, 5, 6, 7, 9],
        [2, 3, 4, 5, 9],
        [2, 3, 4, 6, 7],
        [2, 3, 4, 6, 9],
        [2, 3, 5, 7, 8],
        [2, 3, 5, 7, 9],
        [2, 3, 6, 7, 9],
        [2, 4, 5, 6, 8],
        [2, 4, 5, 8, 9],
        [2, 4, 6, 8, 9],
        [2, 5, 7, 8, 9],
        [3, 4, 6, 7, 8],
        [3, 4, 6, 8, 9],
        [3, 5, 6, 7, 8],
        [3, 5, 6, 7, 9],
        [4, 5, 6, 7, 8],
        [4, 5, 7, 8, 9],
    ];
    let tops = FACETS
        .iter()
        .map(|f| f.iter().map(|v| v - 1).collect())
        .collect();
    oriented(SimplicialComplex::from_top_simplices(4, tops).expect("valid CP2"))
}

/// The 6-vertex real projective plane (not orientable).
pub fn rp2_6() -> SimplicialComplex {
    const FACETS: [[usize; 3]; 10] = [
        [0, 1, 2],
        [0, 2, 3],
        [0, 3, 4],
        [0, 4, 5],
        [0, 5, 1],
        [1, 2, 4],
        [2, 3, 5],
        [3, 4, 1],
        [4, 5, 2],
        [5, 1, 3],
    ];
    SimplicialComplex::from_top_simplices(2, FACETS.iter().map(|f| f.to_vec()).collect())
        .expect("valid RP2")
}

/// Möbius' 7-vertex torus, oriented.
pub fn t2() -> SimplicialComplex {
    let mut tops = Vec::new();
    for i in 0..7 {
        tops.push(vec![i, (i + 1) % 7, (i + 3) % 7]);
        tops.push(vec![i, (i + 2) % 7, (i + 3) % 7]);
    }
    oriented(SimplicialComplex::from_top_simplices(2, tops).expect("valid torus"))
}

/// `∂Δ³ × ∂Δ³`, oriented; f-vector (16, 84, 216, 240, 96).
pub fn s2xs2() -> SimplicialComplex {
    let s2 = boundary_of_simplex(2);
    oriented(s2.product(&s2).expect("product of spheres"))
}

/// `T² × T²` on the 7-vertex torus, oriented; f-vector (49, 735, 2450, 2940, 1176).
pub fn t4() -> SimplicialComplex {
    let t = t2().unoriented();
    oriented(t.product(&t).expect("product of tori"))
}

/// Two disjoint copies of `∂Δ³`.
pub fn two_spheres() -> SimplicialComplex {
    let s = boundary_of_simplex(2);
    s.disjoint_union(&s).expect("same dimension")
}

/// Names accepted by [`by_name`], in the order the data files are listed.
pub const NAMES: [&str; 5] = ["s4", "cp2_9", "s2xs2", "t4", "t2"];

pub fn by_name(name: &str) -> Option<SimplicialComplex> {
    Some(match name {
        "s4" => s4(),
        "cp2_9" => cp2_9(),
        "s2xs2" => s2xs2(),
        "t4" => t4(),
        "t2" => t2(),
        "rp2_6" => rp2_6(),
        "circle" => circle(3),
        "s2" => oriented(boundary_of_simplex(2)),
        "point" => point(),
        _ => return None,
    })
}

fn oriented(k: SimplicialComplex) -> SimplicialComplex {
    k.orient().expect("built-in complex is orientable")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    #[test]
    fn f_vectors() {
        assert_eq!(cp2_9().f_vector(), vec![9, 36, 84, 90, 36]);
        assert_eq!(t2().f_vector(), vec![7, 21, 14]);
        assert_eq!(s2xs2().f_vector(), vec![16, 84, 216, 240, 96]);
        assert_eq!(rp2_6().f_vector(), vec![6, 15, 10]);
    }

    #[test]
    fn projective_plane_is_not_orientable() {
        assert!(rp2_6().validate_closed().is_closed());
        assert!(matches!(rp2_6().orient(), Err(Error::NonOrientable(_))));
    }

    #[test]
    fn names_resolve() {
        for n in NAMES {
            assert!(by_name(n).is_some(), "{n}");
        }
    }
}
