//! Cochains, coboundary operators and Betti numbers.
//!
//! Cohomology is indexed in the standard way, `H^k = Ker d_k / Im d_{k-1}`
//! with `d_k` taking k-cochains to (k+1)-cochains.

use std::collections::HashMap;

use num::{BigInt, Integer, Zero};
use rand::Rng;

use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::linalg::{QVector, Rational, SparseMatrix};

/// A rational k-cochain, indexed by `faces(k)` of its complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain {
    degree: usize,
    values: QVector,
}

impl Cochain {
    pub fn new(degree: usize, values: QVector) -> Self {
        Cochain { degree, values }
    }

    pub fn zero(k: &SimplicialComplex, degree: usize) -> Self {
        Cochain::new(degree, QVector::zeros(k.num_faces(degree)))
    }

    /// The constant 0-cochain 1, the unit of the cup product.
    pub fn unit(k: &SimplicialComplex) -> Self {
        Cochain::new(0, QVector::from_i64(&vec![1; k.num_faces(0)]))
    }

    pub fn indicator(k: &SimplicialComplex, degree: usize, index: usize) -> Self {
        Cochain::new(degree, QVector::unit(k.num_faces(degree), index))
    }

    pub fn from_rationals(degree: usize, values: &[Rational]) -> Self {
        Cochain::new(degree, QVector::from_rationals(values))
    }

    /// Entries `a/b` with `|a| ≤ 5` and `1 ≤ b ≤ 4`.
    pub fn random<R: Rng + ?Sized>(k: &SimplicialComplex, degree: usize, rng: &mut R) -> Self {
        let values: Vec<Rational> = (0..k.num_faces(degree))
            .map(|_| {
                Rational::new(
                    BigInt::from(rng.gen_range(-5i64..=5)),
                    BigInt::from(rng.gen_range(1i64..=4)),
                )
            })
            .collect();
        Cochain::from_rationals(degree, &values)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn values(&self) -> &QVector {
        &self.values
    }

    pub fn into_values(self) -> QVector {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_zero()
    }

    pub fn get(&self, i: usize) -> Rational {
        self.values.get(i)
    }

    fn same_degree(&self, other: &Cochain) -> Result<()> {
        if self.degree != other.degree || self.len() != other.len() {
            return Err(Error::Shape(format!(
                "cochains of degree {} and {} cannot be combined",
                self.degree, other.degree
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Cochain) -> Result<Cochain> {
        self.same_degree(other)?;
        Ok(Cochain::new(self.degree, self.values.add(&other.values)))
    }

    pub fn sub(&self, other: &Cochain) -> Result<Cochain> {
        self.same_degree(other)?;
        Ok(Cochain::new(self.degree, self.values.sub(&other.values)))
    }

    pub fn scale(&self, c: &Rational) -> Cochain {
        Cochain::new(self.degree, self.values.scale(c))
    }

    pub fn neg(&self) -> Cochain {
        Cochain::new(self.degree, self.values.neg())
    }

    /// Checks that the cochain lives on `k`.
    pub fn check(&self, k: &SimplicialComplex) -> Result<()> {
        if self.degree > k.dimension() {
            return Err(Error::DegreeOutOfRange {
                degree: self.degree,
                dimension: k.dimension(),
            });
        }
        if self.len() != k.num_faces(self.degree) {
            return Err(Error::Shape(format!(
                "{}-cochain of length {} on a complex with {} faces",
                self.degree,
                self.len(),
                k.num_faces(self.degree)
            )));
        }
        Ok(())
    }
}

/// `d_k`: entry `(τ, σ)` is `(−1)^i` when σ is τ with its i-th vertex deleted.
pub fn coboundary_matrix(k: &SimplicialComplex, degree: usize) -> Result<SparseMatrix> {
    if degree >= k.dimension() {
        return Err(Error::DegreeOutOfRange {
            degree,
            dimension: k.dimension(),
        });
    }
    let rows = k
        .faces(degree + 1)
        .iter()
        .map(|t| {
            t.boundary_faces()
                .map(|(i, f)| {
                    (
                        k.index_of(&f).expect("face lattice is closed"),
                        if i % 2 == 0 { 1 } else { -1 },
                    )
                })
                .collect()
        })
        .collect();
    SparseMatrix::from_rows(k.num_faces(degree + 1), k.num_faces(degree), rows, 1)
}

type Column = Vec<(usize, i64)>;

/// `a·x + b·y` for sorted sparse integer columns.
fn combine(a: i64, x: &[(usize, i64)], b: i64, y: &[(usize, i64)]) -> Result<Column> {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    let mul = |c: i64, v: i64| c.checked_mul(v).ok_or(Error::Overflow);
    while i < x.len() || j < y.len() {
        let take_x = j == y.len() || (i < x.len() && x[i].0 < y[j].0);
        let take_y = i == x.len() || (j < y.len() && y[j].0 < x[i].0);
        if take_x {
            out.push((x[i].0, mul(a, x[i].1)?));
            i += 1;
        } else if take_y {
            out.push((y[j].0, mul(b, y[j].1)?));
            j += 1;
        } else {
            let v = mul(a, x[i].1)?
                .checked_add(mul(b, y[j].1)?)
                .ok_or(Error::Overflow)?;
            if v != 0 {
                out.push((x[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    Ok(out)
}

fn content(cols: &[&Column]) -> i64 {
    cols.iter()
        .flat_map(|c| c.iter())
        .fold(0i64, |g, &(_, v)| g.gcd(&v))
}

fn divide(col: &mut Column, g: i64) {
    col.iter_mut().for_each(|(_, v)| *v /= g);
}

/// Echelon basis of `Ker d_k`, keyed by the largest index in each vector's support.
#[derive(Clone, Debug)]
pub(crate) struct KernelEchelon {
    len: usize,
    /// low index → (basis vector, class coordinate when the vector is a cohomology representative)
    by_low: HashMap<usize, (Column, Option<usize>)>,
    classes: usize,
}

impl KernelEchelon {
    /// Coordinates of a cocycle in the representative basis, modulo coboundaries.
    pub(crate) fn reduce(&self, z: &QVector) -> Result<Vec<Rational>> {
        if z.len() != self.len {
            return Err(Error::Shape(format!(
                "cochain of length {} for {} simplices",
                z.len(),
                self.len
            )));
        }
        let mut coords = vec![Rational::zero(); self.classes];
        let (num, mut den) = z.clone().into_parts();
        let mut num = num;
        while let Some(l) = num.iter().rposition(|x| !x.is_zero()) {
            let (col, class) = self.by_low.get(&l).ok_or(Error::NotCocycle)?;
            let pivot = col.last().expect("nonzero basis vector").1;
            let c = num[l].clone();
            if let Some(ci) = class {
                coords[*ci] = Rational::new(c.clone(), &den * pivot);
            }
            // num ← pivot·num − c·col
            if pivot != 1 {
                num.iter_mut().for_each(|x| *x *= pivot);
                den *= pivot;
            }
            for &(i, v) in col {
                num[i] -= &c * v;
            }
            debug_assert!(num[l].is_zero());
        }
        Ok(coords)
    }
}

#[derive(Clone, Debug)]
struct DegreeData {
    rank: usize,
    representatives: Vec<QVector>,
    echelon: KernelEchelon,
}

/// All coboundaries of a complex together with the column reduction that
/// yields ranks, cocycle representatives and the reduction map on classes.
#[derive(Clone, Debug)]
pub struct CoboundarySet {
    dimension: usize,
    f_vector: Vec<usize>,
    d: Vec<SparseMatrix>,
    degrees: Vec<DegreeData>,
}

impl CoboundarySet {
    /// Builds every `d_k`, asserts `d_{k+1} d_k = 0`, and reduces.
    pub fn new(k: &SimplicialComplex) -> Result<Self> {
        let n = k.dimension();
        let d: Vec<SparseMatrix> = (0..n)
            .map(|j| coboundary_matrix(k, j))
            .collect::<Result<_>>()?;
        for j in 1..n {
            if !d[j].mul(&d[j - 1])?.is_zero() {
                return Err(Error::Internal(format!("d_{j} d_{} is not zero", j - 1)));
            }
        }
        let f_vector = k.f_vector();
        let mut degrees: Vec<DegreeData> = Vec::with_capacity(n + 1);
        // nonzero reduced columns of d_{k-1}, keyed by low
        let mut image: HashMap<usize, Column> = HashMap::new();
        for j in 0..=n {
            let columns = if j < n {
                d[j].transpose()
            } else {
                SparseMatrix::zeros(f_vector[j], 0)
            };
            let (reduced, essential) = reduce_columns(&columns, &image)?;
            let rank = reduced.len();
            let mut by_low: HashMap<usize, (Column, Option<usize>)> =
                image.drain().map(|(l, c)| (l, (c, None))).collect();
            let mut representatives = Vec::with_capacity(essential.len());
            for (ci, (l, v)) in essential.into_iter().enumerate() {
                let mut num = vec![BigInt::zero(); f_vector[j]];
                for &(i, x) in &v {
                    num[i] = BigInt::from(x);
                }
                representatives.push(QVector::from_integers(num));
                by_low.insert(l, (v, Some(ci)));
            }
            let classes = representatives.len();
            degrees.push(DegreeData {
                rank,
                representatives,
                echelon: KernelEchelon {
                    len: f_vector[j],
                    by_low,
                    classes,
                },
            });
            image = reduced
                .into_iter()
                .map(|c| (c.last().unwrap().0, c))
                .collect();
        }
        Ok(CoboundarySet {
            dimension: n,
            f_vector,
            d,
            degrees,
        })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn d(&self, k: usize) -> Result<&SparseMatrix> {
        self.d.get(k).ok_or(Error::DegreeOutOfRange {
            degree: k,
            dimension: self.dimension,
        })
    }

    pub fn matrices(&self) -> &[SparseMatrix] {
        &self.d
    }

    /// `d c`; on top-degree cochains the result is the empty (n+1)-cochain.
    pub fn apply_d(&self, c: &Cochain) -> Result<Cochain> {
        let k = c.degree();
        if k > self.dimension || c.len() != self.f_vector[k] {
            return Err(Error::DegreeOutOfRange {
                degree: k,
                dimension: self.dimension,
            });
        }
        if k == self.dimension {
            return Ok(Cochain::new(k + 1, QVector::zeros(0)));
        }
        Ok(Cochain::new(k + 1, self.d[k].mul_qvec(c.values())?))
    }

    /// `rank d_k`; zero outside `0..n`.
    pub fn rank(&self, k: usize) -> usize {
        self.degrees.get(k).map_or(0, |d| d.rank)
    }

    pub fn betti(&self, k: usize) -> usize {
        self.degrees.get(k).map_or(0, |d| d.representatives.len())
    }

    pub fn betti_numbers(&self) -> Vec<usize> {
        (0..=self.dimension).map(|k| self.betti(k)).collect()
    }

    /// `Σ (−1)^k b_k`, cross-checked against the alternating face count.
    pub fn euler_characteristic(&self) -> Result<i64> {
        let alternate = |v: &[usize]| -> i64 {
            v.iter()
                .enumerate()
                .map(|(i, &x)| if i % 2 == 0 { x as i64 } else { -(x as i64) })
                .sum()
        };
        let chi = alternate(&self.betti_numbers());
        let from_faces = alternate(&self.f_vector);
        if chi != from_faces {
            return Err(Error::Internal(format!(
                "Betti sum {chi} differs from face sum {from_faces}"
            )));
        }
        Ok(chi)
    }

    pub fn f_vector(&self) -> &[usize] {
        &self.f_vector
    }

    pub fn is_cocycle(&self, c: &Cochain) -> Result<bool> {
        Ok(self.apply_d(c)?.is_zero())
    }

    /// Cocycles whose classes form a basis of `H^k`.
    pub fn representatives(&self, k: usize) -> &[QVector] {
        self.degrees
            .get(k)
            .map_or(&[], |d| d.representatives.as_slice())
    }

    pub(crate) fn echelon(&self, k: usize) -> Result<&KernelEchelon> {
        self.degrees
            .get(k)
            .map(|d| &d.echelon)
            .ok_or(Error::DegreeOutOfRange {
                degree: k,
                dimension: self.dimension,
            })
    }

    /// Class coordinates of a cocycle; `NotCocycle` for anything else.
    pub fn reduce(&self, c: &Cochain) -> Result<Vec<Rational>> {
        self.echelon(c.degree())?.reduce(c.values())
    }

    pub fn is_coboundary(&self, c: &Cochain) -> Result<bool> {
        Ok(self.reduce(c)?.iter().all(Zero::is_zero))
    }
}

/// Column reduction of one coboundary (columns given as rows of `columns`).
/// Columns that are lows of the previous degree's reduction reduce to zero
/// and are skipped. Returns the nonzero reduced columns and, for every other
/// zero column, `(j, V_j)` with `d V_j = 0` and `low(V_j) = j`.
#[allow(clippy::type_complexity)]
fn reduce_columns(
    columns: &SparseMatrix,
    cleared: &HashMap<usize, Column>,
) -> Result<(Vec<Column>, Vec<(usize, Column)>)> {
    let mut pivot_of_low: HashMap<usize, usize> = HashMap::new();
    let mut reduced: Vec<(Column, Column)> = Vec::new();
    let mut essential = Vec::new();
    for j in 0..columns.rows() {
        if cleared.contains_key(&j) {
            continue;
        }
        let mut r: Column = columns.row(j).to_vec();
        let mut v: Column = vec![(j, 1)];
        loop {
            let Some(&(l, a)) = r.last() else {
                if v.last().unwrap().1 < 0 {
                    v.iter_mut().for_each(|(_, x)| *x = -*x);
                }
                essential.push((j, v));
                break;
            };
            let Some(&p) = pivot_of_low.get(&l) else {
                pivot_of_low.insert(l, reduced.len());
                reduced.push((r, v));
                break;
            };
            let (rp, vp) = &reduced[p];
            let b = rp.last().unwrap().1;
            let g = a.gcd(&b);
            let (a, b) = (a / g, b / g);
            r = combine(b, &r, -a, rp)?;
            v = combine(b, &v, -a, vp)?;
            let g = content(&[&r, &v]);
            if g.abs() > 1 {
                divide(&mut r, g.abs());
                divide(&mut v, g.abs());
            }
        }
    }
    Ok((reduced.into_iter().map(|(r, _)| r).collect(), essential))
}

/// Betti numbers `b_0..b_n`.
pub fn betti_numbers(k: &SimplicialComplex) -> Result<Vec<usize>> {
    Ok(CoboundarySet::new(k)?.betti_numbers())
}

/// `Σ (−1)^k b_k`, cross-checked against the alternating face count.
pub fn euler_characteristic(k: &SimplicialComplex) -> Result<i64> {
    CoboundarySet::new(k)?.euler_characteristic()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::int;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn boundary_of_simplex(n: usize) -> SimplicialComplex {
        let tops = (0..=n + 1)
            .map(|skip| (0..=n + 1).filter(|&v| v != skip).collect())
            .collect();
        SimplicialComplex::from_top_simplices(n, tops).unwrap()
    }

    #[test]
    fn circle_incidence() {
        let k = boundary_of_simplex(1);
        let d0 = coboundary_matrix(&k, 0).unwrap().to_dense();
        assert_eq!(d0.rows(), 3);
        for i in 0..3 {
            let row = d0.row(i);
            assert_eq!(row.iter().filter(|x| **x == int(1)).count(), 1);
            assert_eq!(row.iter().filter(|x| **x == int(-1)).count(), 1);
        }
        assert!(coboundary_matrix(&k, 1).is_err());
    }

    #[test]
    fn four_sphere_shapes_and_betti() {
        let k = boundary_of_simplex(4);
        let d3 = coboundary_matrix(&k, 3).unwrap();
        assert_eq!((d3.rows(), d3.cols()), (6, 15));
        let d2 = coboundary_matrix(&k, 2).unwrap();
        assert_eq!((d2.rows(), d2.cols()), (15, 20));
        let c = CoboundarySet::new(&k).unwrap();
        assert_eq!(c.betti_numbers(), vec![1, 0, 0, 0, 1]);
        assert_eq!(c.rank(1), 10);
        assert_eq!(euler_characteristic(&k).unwrap(), 2);
    }

    #[test]
    fn point_complex() {
        let k = SimplicialComplex::from_top_simplices(0, vec![vec![0]]).unwrap();
        assert_eq!(betti_numbers(&k).unwrap(), vec![1]);
        assert_eq!(euler_characteristic(&k).unwrap(), 1);
    }

    #[test]
    fn reduction_kills_coboundaries() {
        let k = boundary_of_simplex(4);
        let c = CoboundarySet::new(&k).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for deg in 0..4 {
            let t = Cochain::random(&k, deg, &mut rng);
            let dt = c.apply_d(&t).unwrap();
            assert!(c.is_coboundary(&dt).unwrap());
        }
        let top = Cochain::indicator(&k, 4, 2);
        assert_eq!(c.reduce(&top).unwrap().len(), 1);
        assert!(!c.is_coboundary(&top).unwrap());
        let not_closed = Cochain::indicator(&k, 1, 0);
        assert!(matches!(c.reduce(&not_closed), Err(Error::NotCocycle)));
    }

    #[test]
    fn representatives_are_cocycles() {
        let k = boundary_of_simplex(2);
        let c = CoboundarySet::new(&k).unwrap();
        for deg in 0..=2 {
            for z in c.representatives(deg) {
                let z = Cochain::new(deg, z.clone());
                assert!(c.is_cocycle(&z).unwrap());
                let coords = c.reduce(&z).unwrap();
                assert_eq!(coords.iter().filter(|x| !x.is_zero()).count(), 1);
            }
        }
        assert_eq!(c.representatives(0)[0], QVector::from_i64(&[1, 1, 1, 1]));
    }
}
