//! Simplicial complexes intended as triangulations of closed oriented manifolds.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A simplex in canonical form: strictly increasing vertex indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Simplex(Vec<usize>);

impl Simplex {
    /// Sorts the vertices; repeated vertices or an empty list are rejected.
    pub fn new(vertices: impl Into<Vec<usize>>) -> Result<Self> {
        Self::with_sign(vertices).map(|(s, _)| s)
    }

    /// Canonical simplex together with the sign of the sorting permutation.
    pub fn with_sign(vertices: impl Into<Vec<usize>>) -> Result<(Self, i8)> {
        let mut v = vertices.into();
        if v.is_empty() {
            return Err(Error::Malformed("empty simplex".into()));
        }
        let sign = permutation_sign(&v);
        v.sort_unstable();
        if v.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Malformed(format!("simplex {v:?} repeats a vertex")));
        }
        Ok((Simplex(v), sign))
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn dimension(&self) -> usize {
        self.0.len() - 1
    }

    /// The face obtained by deleting the `i`-th vertex.
    pub fn face(&self, i: usize) -> Simplex {
        let mut v = self.0.clone();
        v.remove(i);
        Simplex(v)
    }

    /// `(i, face(i))` for every vertex position.
    pub fn boundary_faces(&self) -> impl Iterator<Item = (usize, Simplex)> + '_ {
        (0..self.0.len()).map(move |i| (i, self.face(i)))
    }

    /// The face spanned by positions `lo..=hi`.
    pub fn slice(&self, lo: usize, hi: usize) -> Simplex {
        Simplex(self.0[lo..=hi].to_vec())
    }
}

impl TryFrom<Vec<usize>> for Simplex {
    type Error = Error;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        Simplex::new(v)
    }
}

impl From<Simplex> for Vec<usize> {
    fn from(s: Simplex) -> Self {
        s.0
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Sign of the permutation sorting `v` (entries assumed distinct).
pub(crate) fn permutation_sign(v: &[usize]) -> i8 {
    let mut inversions = 0usize;
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            if v[i] > v[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Result of [`SimplicialComplex::validate_closed`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosedDiagnostics {
    /// Codimension-one faces whose number of cofaces is not 2, with that number.
    pub bad_faces: Vec<(Simplex, usize)>,
    pub connected: bool,
}

impl ClosedDiagnostics {
    pub fn is_closed(&self) -> bool {
        self.bad_faces.is_empty() && self.connected
    }
}

/// A pure simplicial complex with all face lattices built.
///
/// Faces of every dimension are kept in lexicographic order of their vertex
/// tuples and top simplices are `faces(n)`. The optional orientation assigns
/// a sign to each top simplex relative to its sorted vertex order.
#[derive(Clone, Debug)]
pub struct SimplicialComplex {
    dimension: usize,
    faces: Vec<Vec<Simplex>>,
    index: Vec<HashMap<Simplex, usize>>,
    orientation: Option<Vec<i8>>,
}

impl PartialEq for SimplicialComplex {
    fn eq(&self, other: &Self) -> bool {
        self.dimension == other.dimension
            && self.faces == other.faces
            && self.orientation == other.orientation
    }
}

impl Eq for SimplicialComplex {}

impl SimplicialComplex {
    /// Builds every face lattice from a list of top simplices of dimension `dimension`.
    pub fn from_top_simplices(dimension: usize, tops: Vec<Vec<usize>>) -> Result<Self> {
        Self::from_signed(dimension, tops, None)
    }

    /// Top simplices with optional orientation signs given relative to the
    /// vertex order as listed; signs are transported to the sorted order.
    pub fn from_signed(
        dimension: usize,
        tops: Vec<Vec<usize>>,
        signs: Option<Vec<i64>>,
    ) -> Result<Self> {
        if tops.is_empty() {
            return Err(Error::Malformed("no top simplices".into()));
        }
        if let Some(s) = &signs {
            if s.len() != tops.len() {
                return Err(Error::Malformed(format!(
                    "{} orientation signs for {} top simplices",
                    s.len(),
                    tops.len()
                )));
            }
            if s.iter().any(|&x| x != 1 && x != -1) {
                return Err(Error::Malformed(
                    "orientation signs must be +1 or -1".into(),
                ));
            }
        }
        let mut canonical = Vec::with_capacity(tops.len());
        for (k, t) in tops.into_iter().enumerate() {
            if t.len() != dimension + 1 {
                return Err(Error::MixedDimension {
                    expected: dimension,
                    simplex: t,
                });
            }
            let (s, parity) = Simplex::with_sign(t)?;
            let sign = signs.as_ref().map(|v| v[k] as i8 * parity);
            canonical.push((s, sign));
        }
        canonical.sort_by(|a, b| a.0.cmp(&b.0));
        if let Some(w) = canonical.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::DuplicateSimplex(w[0].0 .0.clone()));
        }
        let orientation = signs.map(|_| {
            canonical
                .iter()
                .map(|(_, s)| s.unwrap())
                .collect::<Vec<i8>>()
        });
        let tops: Vec<Simplex> = canonical.into_iter().map(|(s, _)| s).collect();
        let mut complex = Self::build(dimension, tops);
        if let Some(o) = orientation {
            complex = complex.with_orientation(o)?;
        }
        Ok(complex)
    }

    fn build(dimension: usize, tops: Vec<Simplex>) -> Self {
        let mut sets: Vec<BTreeSet<Simplex>> = vec![BTreeSet::new(); dimension + 1];
        for t in &tops {
            let v = t.vertices();
            let m = v.len();
            for mask in 1u64..(1u64 << m) {
                let sub: Vec<usize> = (0..m)
                    .filter(|&i| mask >> i & 1 == 1)
                    .map(|i| v[i])
                    .collect();
                sets[sub.len() - 1].insert(Simplex(sub));
            }
        }
        let faces: Vec<Vec<Simplex>> = sets.into_iter().map(|s| s.into_iter().collect()).collect();
        let index = faces
            .iter()
            .map(|fs| {
                fs.iter()
                    .cloned()
                    .enumerate()
                    .map(|(i, s)| (s, i))
                    .collect()
            })
            .collect();
        SimplicialComplex {
            dimension,
            faces,
            index,
            orientation: None,
        }
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn faces(&self, k: usize) -> &[Simplex] {
        self.faces.get(k).map_or(&[], Vec::as_slice)
    }

    pub fn num_faces(&self, k: usize) -> usize {
        self.faces(k).len()
    }

    pub fn top_simplices(&self) -> &[Simplex] {
        &self.faces[self.dimension]
    }

    pub fn vertices(&self) -> Vec<usize> {
        self.faces[0].iter().map(|s| s.0[0]).collect()
    }

    pub fn index_of(&self, s: &Simplex) -> Option<usize> {
        self.index
            .get(s.dimension())
            .and_then(|m| m.get(s).copied())
    }

    pub fn f_vector(&self) -> Vec<usize> {
        self.faces.iter().map(Vec::len).collect()
    }

    /// `Σ (−1)^k f_k`.
    pub fn face_euler_characteristic(&self) -> i64 {
        self.faces
            .iter()
            .enumerate()
            .map(|(k, f)| {
                if k % 2 == 0 {
                    f.len() as i64
                } else {
                    -(f.len() as i64)
                }
            })
            .sum()
    }

    pub fn orientation(&self) -> Option<&[i8]> {
        self.orientation.as_deref()
    }

    pub fn is_oriented(&self) -> bool {
        self.orientation.is_some()
    }

    /// Codimension-one faces with their cofaces: `(top index, deleted position)`.
    fn ridge_incidence(&self) -> Vec<Vec<(usize, usize)>> {
        if self.dimension == 0 {
            return Vec::new();
        }
        let mut inc = vec![Vec::new(); self.num_faces(self.dimension - 1)];
        for (t, s) in self.top_simplices().iter().enumerate() {
            for (i, f) in s.boundary_faces() {
                inc[self.index[self.dimension - 1][&f]].push((t, i));
            }
        }
        inc
    }

    /// Components of the graph on top simplices joined through shared
    /// codimension-one faces.
    fn dual_components(&self, incidence: &[Vec<(usize, usize)>]) -> usize {
        let n = self.top_simplices().len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut components = n;
        for cofaces in incidence {
            for w in cofaces.windows(2) {
                let (a, b) = (find(&mut parent, w[0].0), find(&mut parent, w[1].0));
                if a != b {
                    parent[a] = b;
                    components -= 1;
                }
            }
        }
        components
    }

    /// Every codimension-one face whose coface count differs from 2, and
    /// whether the dual graph is connected.
    pub fn validate_closed(&self) -> ClosedDiagnostics {
        let incidence = self.ridge_incidence();
        let bad_faces = incidence
            .iter()
            .enumerate()
            .filter(|(_, c)| c.len() != 2)
            .map(|(i, c)| (self.faces[self.dimension - 1][i].clone(), c.len()))
            .collect();
        ClosedDiagnostics {
            bad_faces,
            connected: self.dual_components(&incidence) == 1,
        }
    }

    /// Number of components of the dual graph.
    pub fn dual_component_count(&self) -> usize {
        self.dual_components(&self.ridge_incidence())
    }

    /// Codimension-one faces lying in exactly one top simplex.
    pub fn boundary_ridges(&self) -> Vec<Simplex> {
        self.ridge_incidence()
            .iter()
            .enumerate()
            .filter(|(_, c)| c.len() == 1)
            .map(|(i, _)| self.faces[self.dimension - 1][i].clone())
            .collect()
    }

    /// Coherent orientation by breadth-first propagation from the first top
    /// simplex, which receives the sign +1.
    pub fn orient(&self) -> Result<Self> {
        if !self.validate_closed().is_closed() {
            return Err(Error::NotClosed);
        }
        let incidence = self.ridge_incidence();
        let n = self.top_simplices().len();
        let mut neighbours: Vec<Vec<(usize, usize, usize)>> = vec![Vec::new(); n];
        for c in &incidence {
            let ((a, i), (b, j)) = (c[0], c[1]);
            neighbours[a].push((b, i, j));
            neighbours[b].push((a, j, i));
        }
        let mut sign = vec![0i8; n];
        sign[0] = 1;
        let mut queue = VecDeque::from([0usize]);
        while let Some(a) = queue.pop_front() {
            for &(b, i, j) in &neighbours[a] {
                // induced orientations s_a (−1)^i and s_b (−1)^j must be opposite
                let want = if (i + j) % 2 == 0 { -sign[a] } else { sign[a] };
                if sign[b] == 0 {
                    sign[b] = want;
                    queue.push_back(b);
                } else if sign[b] != want {
                    return Err(Error::NonOrientable(self.top_simplices()[b].clone()));
                }
            }
        }
        let mut k = self.clone();
        k.orientation = Some(sign);
        Ok(k)
    }

    /// Whether `signs` induce opposite orientations on every shared face.
    pub fn is_coherent(&self, signs: &[i8]) -> bool {
        signs.len() == self.top_simplices().len()
            && self.ridge_incidence().iter().all(|c| match c.as_slice() {
                [(a, i), (b, j)] => {
                    let ea = if i % 2 == 0 { signs[*a] } else { -signs[*a] };
                    let eb = if j % 2 == 0 { signs[*b] } else { -signs[*b] };
                    ea == -eb
                }
                _ => true,
            })
    }

    /// Attaches explicit signs aligned with [`Self::top_simplices`].
    pub fn with_orientation(&self, signs: Vec<i8>) -> Result<Self> {
        if signs.len() != self.top_simplices().len() || signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::Malformed(
                "orientation must have one ±1 per top simplex".into(),
            ));
        }
        if !self.is_coherent(&signs) {
            return Err(Error::IncoherentOrientation);
        }
        let mut k = self.clone();
        k.orientation = Some(signs);
        Ok(k)
    }

    /// Same complex with the orientation dropped.
    pub fn unoriented(&self) -> Self {
        let mut k = self.clone();
        k.orientation = None;
        k
    }

    /// Opposite orientation; unoriented complexes are returned unchanged.
    pub fn reversed(&self) -> Self {
        let mut k = self.clone();
        if let Some(o) = &mut k.orientation {
            o.iter_mut().for_each(|s| *s = -*s);
        }
        k
    }

    /// Applies an injective vertex relabeling, transporting the orientation so
    /// that every ordered top simplex keeps its sign.
    pub fn relabel(&self, map: &HashMap<usize, usize>) -> Result<Self> {
        let image: BTreeSet<usize> = self
            .vertices()
            .iter()
            .filter_map(|v| map.get(v).copied())
            .collect();
        if image.len() != self.num_faces(0) {
            return Err(Error::InvalidMap(
                "relabeling must be injective and total on vertices".into(),
            ));
        }
        let mut tops = Vec::new();
        for s in self.top_simplices() {
            tops.push(s.vertices().iter().map(|v| map[v]).collect::<Vec<_>>());
        }
        let signs = self
            .orientation
            .as_ref()
            .map(|o| o.iter().map(|&s| s as i64).collect());
        Self::from_signed(self.dimension, tops, signs)
    }

    /// Disjoint union; the second complex's vertices are shifted past the first's.
    pub fn disjoint_union(&self, other: &Self) -> Result<Self> {
        if self.dimension != other.dimension {
            return Err(Error::MixedDimension {
                expected: self.dimension,
                simplex: other.top_simplices()[0].0.clone(),
            });
        }
        let shift = self.vertices().last().map_or(0, |v| v + 1);
        let mut tops: Vec<Vec<usize>> = self.top_simplices().iter().map(|s| s.0.clone()).collect();
        tops.extend(
            other
                .top_simplices()
                .iter()
                .map(|s| s.0.iter().map(|v| v + shift).collect()),
        );
        Self::from_top_simplices(self.dimension, tops)
    }

    /// Staircase triangulation of the product. The product vertex of `(v, w)`
    /// is `rank(v) · |V(other)| + rank(w)`, so vertex order is lexicographic
    /// and every staircase simplex is already sorted. The result is unoriented.
    pub fn product(&self, other: &Self) -> Result<Self> {
        let (vs, ws) = (self.vertices(), other.vertices());
        let rank_v: HashMap<usize, usize> = vs.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let rank_w: HashMap<usize, usize> = ws.iter().enumerate().map(|(i, &w)| (w, i)).collect();
        let width = ws.len();
        let (p, q) = (self.dimension, other.dimension);
        let paths = staircase_paths(p, q);
        let mut tops = Vec::new();
        for s in self.top_simplices() {
            for t in other.top_simplices() {
                for path in &paths {
                    tops.push(
                        path.iter()
                            .map(|&(i, j)| rank_v[&s.0[i]] * width + rank_w[&t.0[j]])
                            .collect::<Vec<_>>(),
                    );
                }
            }
        }
        Self::from_top_simplices(p + q, tops)
    }
}

/// Monotone lattice paths from `(0, 0)` to `(p, q)`, as vertex sequences.
pub(crate) fn staircase_paths(p: usize, q: usize) -> Vec<Vec<(usize, usize)>> {
    fn extend(
        i: usize,
        j: usize,
        p: usize,
        q: usize,
        cur: &mut Vec<(usize, usize)>,
        out: &mut Vec<Vec<(usize, usize)>>,
    ) {
        cur.push((i, j));
        if i == p && j == q {
            out.push(cur.clone());
        } else {
            if i < p {
                extend(i + 1, j, p, q, cur, out);
            }
            if j < q {
                extend(i, j + 1, p, q, cur, out);
            }
        }
        cur.pop();
    }
    let mut out = Vec::new();
    extend(0, 0, p, q, &mut Vec::new(), &mut out);
    out
}
