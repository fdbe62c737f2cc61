//! Integer Smith normal form of simplicial boundary matrices, built from the
//! top simplices alone so that nothing is shared with the library's chain code.

use std::collections::{BTreeSet, HashMap};

use siglab::complex::SimplicialComplex;

/// Sparse integer matrix as rows of `column → entry`.
type Rows = Vec<HashMap<usize, i64>>;

/// All `k`-faces generated by the top simplices, sorted.
pub fn faces(k: &SimplicialComplex) -> Vec<Vec<Vec<usize>>> {
    let n = k.dimension();
    let mut sets = vec![BTreeSet::new(); n + 1];
    for t in k.top_simplices() {
        let v = t.vertices();
        for mask in 1u32..(1 << v.len()) {
            let s: Vec<usize> = (0..v.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| v[i])
                .collect();
            sets[s.len() - 1].insert(s);
        }
    }
    sets.into_iter().map(|s| s.into_iter().collect()).collect()
}

/// `∂_k : C_k → C_{k−1}` as rows indexed by `k`-faces.
fn boundary(lower: &[Vec<usize>], upper: &[Vec<usize>]) -> Rows {
    let index: HashMap<&[usize], usize> = lower
        .iter()
        .enumerate()
        .map(|(i, s)| (s.as_slice(), i))
        .collect();
    upper
        .iter()
        .map(|s| {
            (0..s.len())
                .map(|i| {
                    let mut f = s.clone();
                    f.remove(i);
                    (index[f.as_slice()], if i % 2 == 0 { 1 } else { -1 })
                })
                .collect()
        })
        .collect()
}

/// Nonzero invariant factors of an integer matrix, ascending.
pub fn invariant_factors(mut rows: Rows) -> Vec<i64> {
    let mut factors = Vec::new();
    let mut cols: HashMap<usize, BTreeSet<usize>> = HashMap::new();
    for (r, row) in rows.iter().enumerate() {
        for &c in row.keys() {
            cols.entry(c).or_default().insert(r);
        }
    }
    // unit pivots first, cheapest fill-in first
    loop {
        let mut best: Option<(usize, usize, usize)> = None;
        for (r, row) in rows.iter().enumerate() {
            for (&c, &a) in row {
                if a.abs() == 1 {
                    let cost = (row.len() - 1) * (cols[&c].len() - 1);
                    if best.map_or(true, |b| cost < b.2) {
                        best = Some((r, c, cost));
                    }
                }
            }
        }
        let Some((r, c, _)) = best else { break };
        let pivot = std::mem::take(&mut rows[r]);
        let a = pivot[&c];
        for &c2 in pivot.keys() {
            cols.get_mut(&c2).unwrap().remove(&r);
        }
        let others: Vec<usize> = cols[&c].iter().copied().collect();
        for o in others {
            let f = rows[o][&c] * a;
            for (&c2, &v) in &pivot {
                let e = rows[o].entry(c2).or_insert(0);
                *e = e
                    .checked_sub(f.checked_mul(v).expect("entry overflow"))
                    .expect("entry overflow");
                if *e == 0 {
                    rows[o].remove(&c2);
                    cols.get_mut(&c2).unwrap().remove(&o);
                } else {
                    cols.get_mut(&c2).unwrap().insert(o);
                }
            }
        }
        factors.push(1);
    }
    // whatever is left has no unit entries and is small: dense Smith form
    let live: Vec<usize> = (0..rows.len()).filter(|&r| !rows[r].is_empty()).collect();
    let mut colset: Vec<usize> = live
        .iter()
        .flat_map(|&r| rows[r].keys().copied())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    colset.sort_unstable();
    let cpos: HashMap<usize, usize> = colset.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let mut dense: Vec<Vec<i128>> = live
        .iter()
        .map(|&r| {
            let mut v = vec![0i128; colset.len()];
            for (&c, &a) in &rows[r] {
                v[cpos[&c]] = a as i128;
            }
            v
        })
        .collect();
    factors.extend(dense_smith(&mut dense));
    factors.sort_unstable();
    factors
}

fn dense_smith(m: &mut [Vec<i128>]) -> Vec<i64> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut out = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // smallest nonzero entry in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if m[i][j] != 0 && best.map_or(true, |(a, b)| m[i][j].abs() < m[a][b].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((i, j)) = best else { break };
        m.swap(t, i);
        for row in m.iter_mut() {
            row.swap(t, j);
        }
        let mut done = true;
        for i in t + 1..rows {
            let q = m[i][t].div_euclid(m[t][t]);
            if q != 0 {
                for j in t..cols {
                    m[i][j] -= q * m[t][j];
                }
            }
            done &= m[i][t] == 0;
        }
        for j in t + 1..cols {
            let q = m[t][j].div_euclid(m[t][t]);
            if q != 0 {
                for i in t..rows {
                    m[i][j] -= q * m[i][t];
                }
            }
            done &= m[t][j] == 0;
        }
        if !done {
            continue;
        }
        // the pivot must divide the rest of the block
        if let Some(i) = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| m[i][j] % m[t][t] != 0)) {
            for j in t..cols {
                m[t][j] += m[i][j];
            }
            continue;
        }
        out.push(m[t][t].abs() as i64);
        t += 1;
    }
    out
}

/// Integral homology ranks and torsion, and the rational Betti numbers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Oracle {
    pub f_vector: Vec<usize>,
    /// `rank ∂_k` for `k = 1..=n` (index 0 is `∂_0 = 0`).
    pub ranks: Vec<usize>,
    /// Invariant factors greater than 1 of `∂_{k+1}`: torsion of `H_k`.
    pub torsion: Vec<Vec<i64>>,
    pub betti: Vec<usize>,
}

impl Oracle {
    pub fn euler_characteristic(&self) -> i64 {
        self.betti
            .iter()
            .enumerate()
            .map(|(k, &b)| if k % 2 == 0 { b as i64 } else { -(b as i64) })
            .sum()
    }
}

pub fn oracle(k: &SimplicialComplex) -> Oracle {
    let fs = faces(k);
    let n = k.dimension();
    let mut ranks = vec![0];
    let mut torsion = vec![Vec::new(); n + 1];
    for d in 1..=n {
        let factors = invariant_factors(boundary(&fs[d - 1], &fs[d]));
        ranks.push(factors.len());
        torsion[d - 1] = factors.into_iter().filter(|&x| x > 1).collect();
    }
    ranks.push(0);
    let f_vector: Vec<usize> = fs.iter().map(Vec::len).collect();
    let betti = (0..=n)
        .map(|d| f_vector[d] - ranks[d] - ranks[d + 1])
        .collect();
    ranks.pop();
    Oracle {
        f_vector,
        ranks,
        torsion,
        betti,
    }
}
