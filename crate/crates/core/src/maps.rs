//! Simplicial maps, pullbacks, induced maps on cohomology, and the prism
//! `K × [0, 1]` with its cochain homotopy.

use std::collections::{BTreeMap, HashMap};

use num::{BigInt, Zero};

use crate::chain::{CoboundarySet, Cochain};
use crate::cohomology::{cup, CohomologyBasis};
use crate::complex::{Simplex, SimplicialComplex};
use crate::error::{Error, Result};
use crate::linalg::{QVector, RationalMatrix, SparseMatrix};

/// Vertex map `source → target` sending every simplex onto a (possibly
/// lower-dimensional) simplex of the target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialMap {
    source: SimplicialComplex,
    target: SimplicialComplex,
    images: BTreeMap<usize, usize>,
}

/// Image of an ordered simplex: `None` when two vertices collide, else the
/// canonical simplex and the sign of the sorting permutation.
fn image_of(images: &BTreeMap<usize, usize>, s: &Simplex) -> Result<Option<(Simplex, i8)>> {
    let v: Vec<usize> = s.vertices().iter().map(|x| images[x]).collect();
    let mut sorted = v.clone();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Ok(None);
    }
    Simplex::with_sign(v).map(Some)
}

impl SimplicialMap {
    /// Checks totality and that the vertex set of every top simplex of the
    /// source lands on a face of the target.
    pub fn new(
        source: SimplicialComplex,
        target: SimplicialComplex,
        images: BTreeMap<usize, usize>,
    ) -> Result<Self> {
        for v in source.vertices() {
            match images.get(&v) {
                None => return Err(Error::InvalidMap(format!("vertex {v} has no image"))),
                Some(w) if target.index_of(&Simplex::new(vec![*w])?).is_none() => {
                    return Err(Error::InvalidMap(format!(
                        "vertex {v} maps to {w}, not a target vertex"
                    )))
                }
                _ => {}
            }
        }
        if images.len() != source.num_faces(0) {
            return Err(Error::InvalidMap(
                "images given for vertices outside the source".into(),
            ));
        }
        for s in source.top_simplices() {
            let mut support: Vec<usize> = s.vertices().iter().map(|v| images[v]).collect();
            support.sort_unstable();
            support.dedup();
            if target.index_of(&Simplex::new(support.clone())?).is_none() {
                return Err(Error::InvalidMap(format!(
                    "image {support:?} of {s} is not a target simplex"
                )));
            }
        }
        Ok(SimplicialMap {
            source,
            target,
            images,
        })
    }

    /// `vertex_map[i]` is the image of the `i`-th source vertex in increasing order.
    pub fn from_vertex_list(
        source: SimplicialComplex,
        target: SimplicialComplex,
        vertex_map: &[usize],
    ) -> Result<Self> {
        let vs = source.vertices();
        if vs.len() != vertex_map.len() {
            return Err(Error::InvalidMap(format!(
                "{} images for {} source vertices",
                vertex_map.len(),
                vs.len()
            )));
        }
        Self::new(
            source,
            target,
            vs.into_iter().zip(vertex_map.iter().copied()).collect(),
        )
    }

    pub fn identity(k: &SimplicialComplex) -> Self {
        let images = k.vertices().into_iter().map(|v| (v, v)).collect();
        SimplicialMap {
            source: k.clone(),
            target: k.clone(),
            images,
        }
    }

    /// Every vertex to the single vertex of `point`.
    pub fn constant(k: &SimplicialComplex, point: &SimplicialComplex) -> Result<Self> {
        let p = point.vertices();
        if p.len() != 1 {
            return Err(Error::InvalidMap(
                "constant map needs a one-vertex target".into(),
            ));
        }
        Self::new(
            k.clone(),
            point.clone(),
            k.vertices().into_iter().map(|v| (v, p[0])).collect(),
        )
    }

    /// The isomorphism `K → K.relabel(map)`.
    pub fn relabeling(k: &SimplicialComplex, map: &HashMap<usize, usize>) -> Result<Self> {
        let target = k.relabel(map)?;
        Self::new(
            k.clone(),
            target,
            map.iter().map(|(&a, &b)| (a, b)).collect(),
        )
    }

    pub fn source(&self) -> &SimplicialComplex {
        &self.source
    }

    pub fn target(&self) -> &SimplicialComplex {
        &self.target
    }

    pub fn image(&self, v: usize) -> Option<usize> {
        self.images.get(&v).copied()
    }

    /// Images of the source vertices in increasing order.
    pub fn vertex_list(&self) -> Vec<usize> {
        self.images.values().copied().collect()
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &SimplicialMap) -> Result<SimplicialMap> {
        if first.target.top_simplices() != self.source.top_simplices() {
            return Err(Error::InvalidMap(
                "composition of maps with mismatched complexes".into(),
            ));
        }
        let images = first
            .images
            .iter()
            .map(|(&v, w)| (v, self.images[w]))
            .collect();
        Self::new(first.source.clone(), self.target.clone(), images)
    }

    /// Bijective on vertices and on top simplices.
    pub fn is_isomorphism(&self) -> bool {
        let mut seen: Vec<usize> = self.images.values().copied().collect();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != self.images.len() || seen.len() != self.target.num_faces(0) {
            return false;
        }
        self.source.dimension() == self.target.dimension()
            && self.source.num_faces(self.source.dimension())
                == self.target.num_faces(self.target.dimension())
    }

    pub fn inverse(&self) -> Result<SimplicialMap> {
        if !self.is_isomorphism() {
            return Err(Error::InvalidMap("only isomorphisms are invertible".into()));
        }
        let images = self.images.iter().map(|(&a, &b)| (b, a)).collect();
        Self::new(self.target.clone(), self.source.clone(), images)
    }

    /// `f*` on `k`-cochains as a `f_k(source) × f_k(target)` matrix with
    /// entries `±1` (sorting sign) or `0` (degenerate image).
    pub fn pullback_matrix(&self, k: usize) -> Result<SparseMatrix> {
        let rows = self
            .source
            .faces(k)
            .iter()
            .map(|s| {
                Ok(match image_of(&self.images, s)? {
                    None => Vec::new(),
                    Some((t, sign)) => {
                        let j = self
                            .target
                            .index_of(&t)
                            .ok_or_else(|| Error::InvalidMap(format!("{t} missing")))?;
                        vec![(j, sign as i64)]
                    }
                })
            })
            .collect::<Result<Vec<_>>>()?;
        SparseMatrix::from_rows(self.source.num_faces(k), self.target.num_faces(k), rows, 1)
    }

    /// `(f*β)(σ) = ±β(f(σ))`, zero on simplices with a degenerate image.
    pub fn pullback(&self, beta: &Cochain) -> Result<Cochain> {
        beta.check(&self.target)?;
        let k = beta.degree();
        let (num, den) = (beta.values().numerators(), beta.values().denominator());
        let mut out = Vec::with_capacity(self.source.num_faces(k));
        for s in self.source.faces(k) {
            out.push(match image_of(&self.images, s)? {
                None => BigInt::zero(),
                Some((t, sign)) => {
                    let j = self
                        .target
                        .index_of(&t)
                        .ok_or_else(|| Error::InvalidMap(format!("{t} missing")))?;
                    &num[j] * sign as i64
                }
            });
        }
        Ok(Cochain::new(k, QVector::from_parts(out, den.clone())))
    }

    /// Degree between oriented closed complexes of equal dimension: the
    /// multiple of the target fundamental class hit by the pushed-forward source class.
    pub fn degree(&self) -> Result<i64> {
        let (so, to) = match (self.source.orientation(), self.target.orientation()) {
            (Some(a), Some(b)) => (a, b),
            _ => return Err(Error::Unoriented),
        };
        let n = self.target.dimension();
        if self.source.dimension() != n {
            return Err(Error::InvalidMap("degree needs equal dimensions".into()));
        }
        let mut push = vec![0i64; self.target.num_faces(n)];
        for (s, &sign) in self.source.top_simplices().iter().zip(so) {
            if let Some((t, e)) = image_of(&self.images, s)? {
                let j = self.target.index_of(&t).expect("validated image");
                push[j] += (sign * e * to[j]) as i64;
            }
        }
        let d = push[0];
        if push.iter().any(|&x| x != d) {
            return Err(Error::Internal(
                "pushed-forward fundamental class is not a multiple".into(),
            ));
        }
        Ok(d)
    }

    pub fn is_orientation_preserving(&self) -> Result<bool> {
        Ok(self.is_isomorphism() && self.degree()? == 1)
    }
}

/// Matrix of `f* : H^k(target) → H^k(source)` in the representative bases:
/// column `j` holds the class coordinates of `f*` applied to the `j`-th
/// target representative.
pub fn induced_map(
    f: &SimplicialMap,
    source: &CohomologyBasis,
    target: &CohomologyBasis,
) -> Result<RationalMatrix> {
    if source.degree() != target.degree() {
        return Err(Error::Shape("cohomology bases of different degrees".into()));
    }
    let mut m = RationalMatrix::zeros(source.len(), target.len());
    for (j, z) in target.representatives().iter().enumerate() {
        for (i, c) in source.reduce(&f.pullback(z)?)?.into_iter().enumerate() {
            m[(i, j)] = c;
        }
    }
    Ok(m)
}

/// [`induced_map`] in every degree `0..=min(dim source, dim target)`.
pub fn induced_maps(
    f: &SimplicialMap,
    source: &CoboundarySet,
    target: &CoboundarySet,
) -> Result<Vec<RationalMatrix>> {
    let top = f.source().dimension().min(f.target().dimension());
    (0..=top)
        .map(|k| {
            induced_map(
                f,
                &CohomologyBasis::new(source, k)?,
                &CohomologyBasis::new(target, k)?,
            )
        })
        .collect()
}

/// `[f*(a ⌣ b)] = [f*a ⌣ f*b]` for all pairs of target basis classes.
pub fn cup_homomorphism_check(
    f: &SimplicialMap,
    source: &CoboundarySet,
    target: &CoboundarySet,
) -> Result<bool> {
    let n = f.source().dimension().min(f.target().dimension());
    let bases = (0..=n)
        .map(|k| CohomologyBasis::new(target, k))
        .collect::<Result<Vec<_>>>()?;
    for p in 0..=n {
        for q in 0..=n - p {
            let classes = CohomologyBasis::new(source, p + q)?;
            for a in bases[p].representatives() {
                for b in bases[q].representatives() {
                    let lhs = f.pullback(&cup(f.target(), a, b)?)?;
                    let rhs = cup(f.source(), &f.pullback(a)?, &f.pullback(b)?)?;
                    if !classes.is_coboundary(&lhs.sub(&rhs)?)? {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}

/// `K × [0, 1]` triangulated by staircases. The bottom copy of vertex `v`
/// is `rank(v)` and the top copy is `|V| + rank(v)`, so every bottom vertex
/// precedes every top vertex and each layer keeps the order of `K`.
#[derive(Clone, Debug)]
pub struct PrismComplex {
    base: SimplicialComplex,
    complex: SimplicialComplex,
    vertices: Vec<usize>,
}

impl PrismComplex {
    pub fn new(base: &SimplicialComplex) -> Result<Self> {
        let vertices = base.vertices();
        let m = vertices.len();
        let rank: HashMap<usize, usize> =
            vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let n = base.dimension();
        let mut tops = Vec::new();
        for s in base.top_simplices() {
            let r: Vec<usize> = s.vertices().iter().map(|v| rank[v]).collect();
            for i in 0..=n {
                let mut t: Vec<usize> = r[..=i].to_vec();
                t.extend(r[i..].iter().map(|x| m + x));
                tops.push(t);
            }
        }
        let complex = SimplicialComplex::from_top_simplices(n + 1, tops)?;
        let prism = PrismComplex {
            base: base.clone(),
            complex,
            vertices,
        };
        prism.validate()?;
        Ok(prism)
    }

    /// Each codimension-one face has one or two cofaces, and those with one
    /// lie in the bottom layer, the top layer, or over the boundary of `K`.
    fn validate(&self) -> Result<()> {
        let m = self.vertices.len();
        let base_boundary: Vec<Simplex> = if self.base.validate_closed().bad_faces.is_empty() {
            Vec::new()
        } else {
            self.base.boundary_ridges()
        };
        for (face, count) in self.complex.validate_closed().bad_faces {
            let v = face.vertices();
            let in_layer = v.iter().all(|&x| x < m) || v.iter().all(|&x| x >= m);
            let mut under: Vec<usize> = v.iter().map(|&x| self.vertices[x % m]).collect();
            under.dedup();
            let over_boundary = base_boundary
                .iter()
                .any(|b| under.iter().all(|u| b.vertices().contains(u)));
            if count != 1 || !(in_layer || over_boundary) {
                return Err(Error::Internal(format!(
                    "prism face {face} has {count} cofaces"
                )));
            }
        }
        Ok(())
    }

    pub fn base(&self) -> &SimplicialComplex {
        &self.base
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    fn layer(&self, top: bool) -> Result<SimplicialMap> {
        let m = self.vertices.len();
        let images = self
            .vertices
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, if top { m + i } else { i }))
            .collect();
        SimplicialMap::new(self.base.clone(), self.complex.clone(), images)
    }

    /// `K → K × {0}`.
    pub fn bottom_inclusion(&self) -> Result<SimplicialMap> {
        self.layer(false)
    }

    /// `K → K × {1}`.
    pub fn top_inclusion(&self) -> Result<SimplicialMap> {
        self.layer(true)
    }

    /// `K × [0, 1] → K`.
    pub fn projection(&self) -> Result<SimplicialMap> {
        let m = self.vertices.len();
        let images = (0..2 * m).map(|x| (x, self.vertices[x % m])).collect();
        SimplicialMap::new(self.complex.clone(), self.base.clone(), images)
    }

    /// `(Pη)(σ) = Σ_i (−1)^i η([v_0⁰ … v_i⁰ v_i¹ … v_{k−1}¹])` for a
    /// `k`-cochain `η` on the prism and `σ = [v_0 … v_{k−1}]` in `K`.
    pub fn homotopy_operator(&self, eta: &Cochain) -> Result<Cochain> {
        eta.check(&self.complex)?;
        let k = eta.degree();
        if k == 0 {
            return Err(Error::DegreeOutOfRange {
                degree: 0,
                dimension: self.complex.dimension(),
            });
        }
        let m = self.vertices.len();
        let rank: HashMap<usize, usize> = self
            .vertices
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, i))
            .collect();
        let num = eta.values().numerators();
        let mut out = Vec::with_capacity(self.base.num_faces(k - 1));
        for s in self.base.faces(k - 1) {
            let r: Vec<usize> = s.vertices().iter().map(|v| rank[v]).collect();
            let mut acc = BigInt::zero();
            for i in 0..r.len() {
                let mut t: Vec<usize> = r[..=i].to_vec();
                t.extend(r[i..].iter().map(|x| m + x));
                let j = self
                    .complex
                    .index_of(&Simplex::new(t)?)
                    .expect("staircase simplex");
                if i % 2 == 0 {
                    acc += &num[j];
                } else {
                    acc -= &num[j];
                }
            }
            out.push(acc);
        }
        Ok(Cochain::new(
            k - 1,
            QVector::from_parts(out, eta.values().denominator().clone()),
        ))
    }

    /// `dPη + Pdη = i₁*η − i₀*η` for one cochain; the first term is absent in degree 0.
    pub fn homotopy_identity_holds(
        &self,
        prism: &CoboundarySet,
        base: &CoboundarySet,
        eta: &Cochain,
    ) -> Result<bool> {
        let k = eta.degree();
        let diff = self
            .top_inclusion()?
            .pullback(eta)?
            .sub(&self.bottom_inclusion()?.pullback(eta)?)?;
        let mut lhs = if k < self.complex.dimension() {
            self.homotopy_operator(&prism.apply_d(eta)?)?
        } else {
            Cochain::zero(&self.base, k)
        };
        if k > 0 {
            lhs = lhs.add(&base.apply_d(&self.homotopy_operator(eta)?)?)?;
        }
        Ok(lhs == diff)
    }
}

/// Induced maps of the two end inclusions agree in every degree of `K`.
pub fn homotopy_invariance_check(prism: &PrismComplex) -> Result<bool> {
    let base = CoboundarySet::new(prism.base())?;
    let total = CoboundarySet::new(prism.complex())?;
    let i0 = induced_maps(&prism.bottom_inclusion()?, &base, &total)?;
    let i1 = induced_maps(&prism.top_inclusion()?, &base, &total)?;
    Ok(i0 == i1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::library;

    #[test]
    fn interval_prism_is_a_square() {
        let p = PrismComplex::new(&library::interval()).unwrap();
        assert_eq!(p.complex().f_vector(), vec![4, 5, 2]);
    }

    #[test]
    fn cylinder_over_the_circle() {
        let p = PrismComplex::new(&library::circle(3)).unwrap();
        assert_eq!(p.complex().f_vector(), vec![6, 12, 6]);
        assert_eq!(p.complex().face_euler_characteristic(), 0);
        assert_eq!(p.complex().boundary_ridges().len(), 6);
    }

    #[test]
    fn projection_after_inclusions_is_identity() {
        let k = library::circle(4);
        let p = PrismComplex::new(&k).unwrap();
        let id = SimplicialMap::identity(&k);
        let pi = p.projection().unwrap();
        assert_eq!(pi.compose(&p.bottom_inclusion().unwrap()).unwrap(), id);
        assert_eq!(pi.compose(&p.top_inclusion().unwrap()).unwrap(), id);
    }

    #[test]
    fn degenerate_images_pull_back_to_zero() {
        let k = library::circle(3);
        let f = SimplicialMap::constant(&k, &library::point()).unwrap();
        assert_eq!(
            f.pullback(&Cochain::unit(&library::point())).unwrap(),
            Cochain::unit(&k)
        );
        let g = SimplicialMap::from_vertex_list(k.clone(), k.clone(), &[0, 0, 1]).unwrap();
        let beta = Cochain::indicator(&k, 1, 0);
        let pulled = g.pullback(&beta).unwrap();
        // edges [0,1] ↦ [0,0] (degenerate), [0,2] ↦ [0,1], [1,2] ↦ [0,1]
        assert_eq!(pulled.values(), &QVector::from_i64(&[0, 1, 1]));
    }

    #[test]
    fn rejects_non_simplicial_vertex_maps() {
        let k = library::circle(4);
        // 0 ↦ 0, 1 ↦ 2 sends the edge [0, 1] to the non-edge [0, 2]
        let bad = SimplicialMap::from_vertex_list(k.clone(), k.clone(), &[0, 2, 2, 3]);
        assert!(matches!(bad, Err(Error::InvalidMap(_))));
        assert!(SimplicialMap::from_vertex_list(k.clone(), k, &[0, 1]).is_err());
    }

    #[test]
    fn identity_has_degree_one() {
        let k = library::s4();
        let id = SimplicialMap::identity(&k);
        assert_eq!(id.degree().unwrap(), 1);
        let flip = SimplicialMap::new(
            k.clone(),
            k.reversed(),
            k.vertices().into_iter().map(|v| (v, v)).collect(),
        )
        .unwrap();
        assert_eq!(flip.degree().unwrap(), -1);
    }
}
