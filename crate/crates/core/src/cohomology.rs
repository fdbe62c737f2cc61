//! Cohomology bases, the Alexander–Whitney cup product, the intersection
//! form and the signature.

use num::{BigInt, Signed, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::chain::{CoboundarySet, Cochain, KernelEchelon};
use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::linalg::{format_rational, Inertia, QVector, Rational, RationalMatrix};

/// Cocycle representatives of a basis of `H^k` with the map reducing any
/// cocycle to its class coordinates.
#[derive(Clone, Debug)]
pub struct CohomologyBasis {
    degree: usize,
    representatives: Vec<Cochain>,
    echelon: KernelEchelon,
}

impl CohomologyBasis {
    pub fn new(cob: &CoboundarySet, degree: usize) -> Result<Self> {
        let echelon = cob.echelon(degree)?.clone();
        let representatives = cob
            .representatives(degree)
            .iter()
            .map(|z| Cochain::new(degree, z.clone()))
            .collect();
        Ok(CohomologyBasis {
            degree,
            representatives,
            echelon,
        })
    }

    pub fn compute(k: &SimplicialComplex, degree: usize) -> Result<Self> {
        Self::new(&CoboundarySet::new(k)?, degree)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.representatives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.representatives.is_empty()
    }

    pub fn representatives(&self) -> &[Cochain] {
        &self.representatives
    }

    /// Class coordinates of a cocycle; coboundaries map to zero.
    pub fn reduce(&self, c: &Cochain) -> Result<Vec<Rational>> {
        if c.degree() != self.degree {
            return Err(Error::Shape(format!(
                "{}-cochain reduced in degree {}",
                c.degree(),
                self.degree
            )));
        }
        self.echelon.reduce(c.values())
    }

    pub fn is_coboundary(&self, c: &Cochain) -> Result<bool> {
        Ok(self.reduce(c)?.iter().all(Zero::is_zero))
    }
}

/// `(a ⌣ b)([v_0 … v_{p+q}]) = a([v_0 … v_p]) · b([v_p … v_{p+q}])`.
pub fn cup(k: &SimplicialComplex, a: &Cochain, b: &Cochain) -> Result<Cochain> {
    a.check(k)?;
    b.check(k)?;
    let (p, q) = (a.degree(), b.degree());
    if p + q > k.dimension() {
        return Err(Error::DegreeOutOfRange {
            degree: p + q,
            dimension: k.dimension(),
        });
    }
    let (an, bn) = (a.values().numerators(), b.values().numerators());
    let num: Vec<BigInt> = k
        .faces(p + q)
        .iter()
        .map(|s| {
            let x = &an[k.index_of(&s.slice(0, p)).expect("front face")];
            if x.is_zero() {
                return BigInt::zero();
            }
            x * &bn[k.index_of(&s.slice(p, p + q)).expect("back face")]
        })
        .collect();
    Ok(Cochain::new(
        p + q,
        QVector::from_parts(num, a.values().denominator() * b.values().denominator()),
    ))
}

/// Evaluation on the fundamental cycle `Σ ε_σ σ`.
pub fn fundamental_evaluate(k: &SimplicialComplex, w: &Cochain) -> Result<Rational> {
    let signs = k.orientation().ok_or(Error::Unoriented)?;
    if w.degree() != k.dimension() {
        return Err(Error::DegreeOutOfRange {
            degree: w.degree(),
            dimension: k.dimension(),
        });
    }
    w.check(k)?;
    let s: BigInt = w
        .values()
        .numerators()
        .iter()
        .zip(signs)
        .map(|(x, &e)| if e > 0 { x.clone() } else { -x })
        .sum();
    Ok(Rational::new(s, w.values().denominator().clone()))
}

/// `∫ a ⌣ b` for complementary degrees.
pub fn pairing(k: &SimplicialComplex, a: &Cochain, b: &Cochain) -> Result<Rational> {
    fundamental_evaluate(k, &cup(k, a, b)?)
}

/// Matrix of `∫ a_i ⌣ b_j`.
pub fn pairing_matrix(
    k: &SimplicialComplex,
    a: &[Cochain],
    b: &[Cochain],
) -> Result<RationalMatrix> {
    let mut m = RationalMatrix::zeros(a.len(), b.len());
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            m[(i, j)] = pairing(k, x, y)?;
        }
    }
    Ok(m)
}

/// Cup-product pairing on middle cohomology.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectionForm {
    pub degree: usize,
    pub matrix: RationalMatrix,
    /// Sign carried by the lexicographically first top simplex.
    pub first_simplex_sign: i8,
}

impl IntersectionForm {
    pub fn rank(&self) -> usize {
        self.matrix.rows()
    }

    pub fn is_symmetric(&self) -> bool {
        self.matrix.is_symmetric()
    }

    pub fn is_antisymmetric(&self) -> bool {
        self.matrix.is_antisymmetric()
    }

    pub fn determinant(&self) -> Rational {
        self.matrix.determinant().expect("square")
    }
}

pub fn intersection_form(k: &SimplicialComplex) -> Result<IntersectionForm> {
    intersection_form_with(k, &CoboundarySet::new(k)?)
}

/// Intersection form on the representatives produced by the column reduction.
pub fn intersection_form_with(
    k: &SimplicialComplex,
    cob: &CoboundarySet,
) -> Result<IntersectionForm> {
    let n = k.dimension();
    if n % 2 == 1 {
        return Err(Error::OddDimension(n));
    }
    let signs = k.orientation().ok_or(Error::Unoriented)?;
    let basis = CohomologyBasis::new(cob, n / 2)?;
    let matrix = pairing_matrix(k, basis.representatives(), basis.representatives())?;
    Ok(IntersectionForm {
        degree: n / 2,
        matrix,
        first_simplex_sign: signs[0],
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParityChecks {
    /// No zero entries in the diagonalized form.
    pub nondegenerate: bool,
    /// `χ ≡ b_{n/2} (mod 2)`.
    pub euler_matches_middle_betti: bool,
    /// `b_{n/2} ≡ σ (mod 2)`.
    pub middle_betti_matches_signature: bool,
}

impl ParityChecks {
    pub fn all(&self) -> bool {
        self.nondegenerate && self.euler_matches_middle_betti && self.middle_betti_matches_signature
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignatureReport {
    pub betti: Vec<usize>,
    pub euler_characteristic: i64,
    pub signature: i64,
    pub inertia: Inertia,
    /// `Σ sign(D_ii)` for the diagonalized form.
    pub trace_of_sign: i64,
    pub determinant: String,
    pub symmetric: bool,
    pub first_simplex_sign: i8,
    pub parity: ParityChecks,
}

pub fn signature(k: &SimplicialComplex) -> Result<SignatureReport> {
    signature_with(k, &CoboundarySet::new(k)?)
}

pub fn signature_with(k: &SimplicialComplex, cob: &CoboundarySet) -> Result<SignatureReport> {
    let n = k.dimension();
    if n % 4 != 0 {
        return Err(Error::NotMultipleOfFour(n));
    }
    let form = intersection_form_with(k, cob)?;
    let congruence = form.matrix.congruence_diagonalize()?;
    let inertia = congruence.inertia();
    let trace_of_sign: i64 = congruence
        .diagonal
        .iter()
        .map(|d| {
            if d.is_positive() {
                1
            } else if d.is_negative() {
                -1
            } else {
                0
            }
        })
        .sum();
    let betti = cob.betti_numbers();
    let chi = cob.euler_characteristic()?;
    let signature = inertia.signature();
    let middle = betti[n / 2] as i64;
    let parity = ParityChecks {
        nondegenerate: inertia.zero == 0,
        euler_matches_middle_betti: (chi - middle).rem_euclid(2) == 0,
        middle_betti_matches_signature: (middle - signature).rem_euclid(2) == 0,
    };
    Ok(SignatureReport {
        betti,
        euler_characteristic: chi,
        signature,
        inertia,
        trace_of_sign,
        determinant: format_rational(&form.determinant()),
        symmetric: form.is_symmetric(),
        first_simplex_sign: form.first_simplex_sign,
        parity,
    })
}

/// Whether `a ⌣ b − (−1)^{pq} b ⌣ a` is a coboundary.
pub fn graded_commutativity_check(
    k: &SimplicialComplex,
    cob: &CoboundarySet,
    a: &Cochain,
    b: &Cochain,
) -> Result<bool> {
    if !cob.is_cocycle(a)? || !cob.is_cocycle(b)? {
        return Err(Error::NotCocycle);
    }
    let (p, q) = (a.degree(), b.degree());
    let ab = cup(k, a, b)?;
    let ba = cup(k, b, a)?;
    let diff = if (p * q) % 2 == 0 {
        ab.sub(&ba)?
    } else {
        ab.add(&ba)?
    };
    cob.is_coboundary(&diff)
}

/// For `trials` random `τ`, pairing `z_i + dτ` against every `z_j` (on both
/// sides) reproduces the intersection form.
pub fn representative_independence_check<R: Rng + ?Sized>(
    k: &SimplicialComplex,
    cob: &CoboundarySet,
    trials: usize,
    rng: &mut R,
) -> Result<bool> {
    let form = intersection_form_with(k, cob)?;
    let m = form.degree;
    if m == 0 {
        return Ok(true);
    }
    let basis = CohomologyBasis::new(cob, m)?;
    let reps = basis.representatives();
    for _ in 0..trials {
        let tau = Cochain::random(k, m - 1, rng);
        let dtau = cob.apply_d(&tau)?;
        for (i, zi) in reps.iter().enumerate() {
            let moved = zi.add(&dtau)?;
            for (j, zj) in reps.iter().enumerate() {
                if pairing(k, &moved, zj)? != form.matrix[(i, j)]
                    || pairing(k, zj, &moved)? != form.matrix[(j, i)]
                {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::library;
    use crate::linalg::int;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn unit_is_neutral() {
        let k = library::s2xs2();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let b = Cochain::random(&k, 2, &mut rng);
        assert_eq!(cup(&k, &Cochain::unit(&k), &b).unwrap(), b);
        assert_eq!(cup(&k, &b, &Cochain::unit(&k)).unwrap(), b);
    }

    #[test]
    fn fundamental_class_basics() {
        let k = library::s4();
        let sign = k.orientation().unwrap()[3];
        let w = Cochain::indicator(&k, 4, 3);
        assert_eq!(fundamental_evaluate(&k, &w).unwrap(), int(sign as i64));
        assert_eq!(
            fundamental_evaluate(&k.reversed(), &w).unwrap(),
            int(-(sign as i64))
        );
        let cob = CoboundarySet::new(&k).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let t = Cochain::random(&k, 3, &mut rng);
        assert!(fundamental_evaluate(&k, &cob.apply_d(&t).unwrap())
            .unwrap()
            .is_zero());
        assert!(matches!(
            fundamental_evaluate(&k.unoriented(), &w),
            Err(Error::Unoriented)
        ));
    }

    #[test]
    fn sphere_signature() {
        let r = signature(&library::s4()).unwrap();
        assert_eq!(r.signature, 0);
        assert_eq!(r.euler_characteristic, 2);
        assert!(r.parity.all());
    }

    #[test]
    fn projective_plane_signature_flips() {
        let k = library::cp2_9();
        let r = signature(&k).unwrap();
        assert_eq!(r.signature.abs(), 1);
        assert_eq!(r.euler_characteristic, 3);
        assert!(r.parity.all());
        assert_eq!(signature(&k.reversed()).unwrap().signature, -r.signature);
    }

    #[test]
    fn torus_pairing_is_antisymmetric() {
        let k = library::t2();
        let q = intersection_form(&k).unwrap();
        assert_eq!(q.rank(), 2);
        assert!(q.is_antisymmetric());
        assert!(!q.determinant().is_zero());
        assert!(matches!(signature(&k), Err(Error::NotMultipleOfFour(2))));
    }

    #[test]
    fn odd_dimension_rejected() {
        assert!(matches!(
            intersection_form(&library::circle(3)),
            Err(Error::OddDimension(1))
        ));
    }

    #[test]
    fn graded_commutativity_on_torus() {
        let k = library::t2();
        let cob = CoboundarySet::new(&k).unwrap();
        let b = CohomologyBasis::new(&cob, 1).unwrap();
        let (x, y) = (&b.representatives()[0], &b.representatives()[1]);
        assert!(graded_commutativity_check(&k, &cob, x, y).unwrap());
        assert!(graded_commutativity_check(&k, &cob, x, x).unwrap());
    }
}
