//! Exact linear algebra over ℚ: echelon bases, ranks, chain complex slices and
//! comparison of maps on cohomology.

use crate::exactalg::Q;
use crate::operad::Elem;
use num::integer::Integer;
use num::{BigInt, One, Signed, Zero};
use serde::Serialize;
use std::collections::{BTreeMap, HashMap};
use std::fmt::Debug;
use std::hash::Hash;

/// Incremental row echelon form keyed by the largest symbol of each row.
/// Every row remembers which inserted vectors it is a combination of.
#[derive(Clone, Debug)]
pub struct Echelon<B: Ord + Clone> {
    rows: BTreeMap<B, (Elem<B>, Elem<usize>)>,
}

impl<B: Ord + Clone> Default for Echelon<B> {
    fn default() -> Self {
        Echelon { rows: BTreeMap::new() }
    }
}

impl<B: Ord + Clone> Echelon<B> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Remainder of v and the combination of inserted tags that was subtracted.
    pub fn reduce(&self, v: &Elem<B>) -> (Elem<B>, Elem<usize>) {
        let mut v = v.clone();
        let mut used = Elem::zero();
        let mut bound: Option<B> = None;
        loop {
            let next = v
                .iter()
                .rev()
                .filter(|(k, _)| bound.as_ref().is_none_or(|b| *k < b))
                .find(|(k, _)| self.rows.contains_key(*k))
                .map(|(k, c)| (k.clone(), c.clone()));
            let Some((k, c)) = next else { break };
            let (row, combo) = &self.rows[&k];
            v.add_scaled(row, &(-c.clone()));
            used.add_scaled(combo, &c);
            bound = Some(k);
        }
        (v, used)
    }

    /// Insert v under `tag`. Returns None when v is new, otherwise the
    /// expression of v through earlier tags.
    pub fn insert(&mut self, v: &Elem<B>, tag: usize) -> Option<Elem<usize>> {
        let (r, used) = self.reduce(v);
        let Some((k, c)) = r.last().map(|(k, c)| (k.clone(), c.clone())) else {
            return Some(used);
        };
        let inv = Q::one() / c;
        let mut combo = used.neg();
        combo.add_term(tag, Q::one());
        self.rows.insert(k, (r.scale(&inv), combo.scale(&inv)));
        None
    }

    pub fn contains(&self, v: &Elem<B>) -> bool {
        self.reduce(v).0.is_zero()
    }

    /// Coefficients c with v = Σ c_t (inserted vector t), if v lies in the span.
    pub fn express(&self, v: &Elem<B>) -> Option<Elem<usize>> {
        let (r, used) = self.reduce(v);
        r.is_zero().then_some(used)
    }
}

/// Keep a maximal linearly independent subfamily, in order.
pub fn independent<B: Ord + Clone>(vs: impl IntoIterator<Item = Elem<B>>) -> Vec<Elem<B>> {
    let mut ech = Echelon::new();
    let mut out = Vec::new();
    for v in vs {
        if ech.insert(&v, out.len()).is_none() {
            out.push(v);
        }
    }
    out
}

/// Rank by fraction-free elimination: rows are cleared to primitive integer
/// vectors and combined as a·r − b·p, dividing out the content each step.
/// Pivots are chosen by smallest leading column, then shortest row.
pub fn rank<B: Ord + Clone + Hash>(vs: &[Elem<B>]) -> usize {
    let mut index: HashMap<B, usize> = HashMap::new();
    let mut keys: Vec<&B> = vs.iter().flat_map(|v| v.iter().map(|(k, _)| k)).collect();
    keys.sort();
    keys.dedup();
    for (i, k) in keys.into_iter().enumerate() {
        index.insert(k.clone(), i);
    }
    let mut rows: Vec<BTreeMap<usize, BigInt>> =
        vs.iter().filter(|v| !v.is_zero()).map(|v| integer_row(v, &index)).collect();
    let mut r = 0;
    while !rows.is_empty() {
        let lead = |row: &BTreeMap<usize, BigInt>| *row.keys().next().unwrap();
        let p = (0..rows.len()).min_by_key(|&i| (lead(&rows[i]), rows[i].len(), i)).unwrap();
        let piv = rows.swap_remove(p);
        let col = lead(&piv);
        let a = piv[&col].clone();
        let mut rest = Vec::with_capacity(rows.len());
        for row in rows {
            if lead(&row) != col {
                rest.push(row);
                continue;
            }
            let b = row[&col].clone();
            let mut out: BTreeMap<usize, BigInt> = BTreeMap::new();
            for (k, x) in &row {
                out.insert(*k, x * &a);
            }
            for (k, y) in &piv {
                let e = out.entry(*k).or_insert_with(BigInt::zero);
                *e -= y * &b;
            }
            out.retain(|_, x| !x.is_zero());
            if !out.is_empty() {
                make_primitive(&mut out);
                rest.push(out);
            }
        }
        rows = rest;
        r += 1;
    }
    r
}

fn integer_row<B: Ord + Clone + Hash>(v: &Elem<B>, index: &HashMap<B, usize>) -> BTreeMap<usize, BigInt> {
    let mut den = BigInt::one();
    for (_, c) in v.iter() {
        den = den.lcm(c.denom());
    }
    let mut row = BTreeMap::new();
    for (k, c) in v.iter() {
        row.insert(index[k], c.numer() * (&den / c.denom()));
    }
    make_primitive(&mut row);
    row
}

fn make_primitive(row: &mut BTreeMap<usize, BigInt>) {
    let mut g = BigInt::zero();
    for x in row.values() {
        g = g.gcd(x);
    }
    if g > BigInt::one() {
        for x in row.values_mut() {
            *x /= &g;
        }
    }
    if row.values().next().is_some_and(|x| x.is_negative()) {
        for x in row.values_mut() {
            *x = -x.clone();
        }
    }
}

/// A window [d_min, d_max] of a cochain complex: a basis per degree (vectors in
/// an ambient coordinate space) and the image of each basis vector.
#[derive(Clone, Debug)]
pub struct ChainComplexSlice<B: Ord + Clone> {
    pub d_min: i64,
    pub d_max: i64,
    pub basis: BTreeMap<i64, Vec<Elem<B>>>,
    pub images: BTreeMap<i64, Vec<Elem<B>>>,
}

/// Build a slice from basis vectors and a differential; refuses when d² ≠ 0.
pub fn assemble<B: Ord + Clone + Debug>(
    d_min: i64,
    d_max: i64,
    mut basis: impl FnMut(i64) -> Vec<Elem<B>>,
    diff: impl Fn(&Elem<B>) -> Elem<B>,
) -> Result<ChainComplexSlice<B>, crate::Error> {
    let mut s = ChainComplexSlice { d_min, d_max, basis: BTreeMap::new(), images: BTreeMap::new() };
    for k in d_min..=d_max {
        let b = basis(k);
        let im: Vec<Elem<B>> = b.iter().map(&diff).collect();
        if k < d_max {
            for (v, w) in b.iter().zip(&im) {
                if !diff(w).is_zero() {
                    return Err(crate::Error::Precondition(format!("d² ≠ 0 on {:?}", v)));
                }
            }
        }
        s.basis.insert(k, b);
        s.images.insert(k, im);
    }
    Ok(s)
}

impl<B: Ord + Clone + Hash> ChainComplexSlice<B> {
    pub fn dim(&self, k: i64) -> usize {
        self.basis.get(&k).map_or(0, |b| b.len())
    }

    fn rank_out(&self, k: i64) -> usize {
        self.images.get(&k).map_or(0, |im| rank(im))
    }

    /// dim H^k for every interior degree d_min < k < d_max.
    pub fn cohomology_dims(&self) -> BTreeMap<i64, usize> {
        let mut out = BTreeMap::new();
        for k in self.d_min + 1..self.d_max {
            out.insert(k, self.dim(k) - self.rank_out(k) - self.rank_out(k - 1));
        }
        out
    }

    /// Cocycles of degree k, as a basis.
    pub fn cocycles(&self, k: i64) -> Vec<Elem<B>> {
        let (Some(b), Some(im)) = (self.basis.get(&k), self.images.get(&k)) else {
            return Vec::new();
        };
        let mut ech = Echelon::new();
        let mut out = Vec::new();
        for (j, w) in im.iter().enumerate() {
            if let Some(c) = ech.insert(w, j) {
                let mut z = b[j].clone();
                for (t, x) in c.iter() {
                    z.add_scaled(&b[*t], &(-x.clone()));
                }
                out.push(z);
            }
        }
        out
    }

    pub fn coboundaries(&self, k: i64) -> Vec<Elem<B>> {
        self.images.get(&(k - 1)).cloned().unwrap_or_default()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DegreeComparison {
    pub degree: i64,
    pub dim_source: usize,
    pub dim_target: usize,
    pub rank_induced: usize,
    pub iso: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct QuasiIsoReport {
    pub degrees: Vec<DegreeComparison>,
    /// Boundary degrees are not judged because the window cuts their differentials.
    pub boundary: (i64, i64),
}

impl QuasiIsoReport {
    pub fn passed(&self) -> bool {
        self.degrees.iter().all(|d| d.iso)
    }
}

/// Compare H(f) on interior degrees. The windows of both slices must agree.
pub fn quasi_iso_check<B, C>(
    src: &ChainComplexSlice<B>,
    tgt: &ChainComplexSlice<C>,
    f: impl Fn(&Elem<B>) -> Elem<C>,
) -> QuasiIsoReport
where
    B: Ord + Clone + Hash,
    C: Ord + Clone + Hash,
{
    let hs = src.cohomology_dims();
    let ht = tgt.cohomology_dims();
    let mut degrees = Vec::new();
    for k in src.d_min.max(tgt.d_min) + 1..src.d_max.min(tgt.d_max) {
        let bt = tgt.coboundaries(k);
        let rb = rank(&bt);
        let mut all = bt;
        all.extend(src.cocycles(k).iter().map(&f));
        let rank_induced = rank(&all) - rb;
        let (ds, dt) = (hs[&k], ht[&k]);
        degrees.push(DegreeComparison {
            degree: k,
            dim_source: ds,
            dim_target: dt,
            rank_induced,
            iso: ds == dt && dt == rank_induced,
        });
    }
    QuasiIsoReport { degrees, boundary: (src.d_min, src.d_max) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::q;
    use rand::{Rng, SeedableRng};

    fn vecs(rows: &[&[i64]]) -> Vec<Elem<usize>> {
        rows.iter()
            .map(|r| Elem::from_terms(r.iter().enumerate().map(|(i, &x)| (i, q(x)))))
            .collect()
    }

    #[test]
    fn rank_agrees_with_echelon_on_random_matrices() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..40 {
            let n = rng.gen_range(1..7);
            let m = rng.gen_range(1..7);
            let rows: Vec<Vec<i64>> = (0..n)
                .map(|_| (0..m).map(|_| if rng.gen_bool(0.5) { rng.gen_range(-3..4) } else { 0 }).collect())
                .collect();
            let mut rows2 = rows.clone();
            // plant a dependency
            if n > 2 {
                rows2[n - 1] = rows[0].iter().zip(&rows[1]).map(|(a, b)| 2 * a - 3 * b).collect();
            }
            let refs: Vec<&[i64]> = rows2.iter().map(|r| r.as_slice()).collect();
            let vs = vecs(&refs);
            assert_eq!(rank(&vs), independent(vs.clone()).len());
        }
    }

    #[test]
    fn identity_two_term_complex_is_acyclic() {
        let s = assemble(
            -1,
            2,
            |k| if k == 0 || k == 1 { vec![Elem::basis(k)] } else { vec![] },
            |v| v.map_basis(|&k| if k == 0 { (1, q(1)) } else { (99, q(0)) }),
        )
        .unwrap();
        assert_eq!(s.cohomology_dims().values().sum::<usize>(), 0);
    }

    #[test]
    fn express_recovers_coefficients() {
        let vs = vecs(&[&[1, 2, 0], &[0, 1, 1]]);
        let mut e = Echelon::new();
        for (i, v) in vs.iter().enumerate() {
            assert!(e.insert(v, i).is_none());
        }
        let target = vs[0].scale(&q(3)).minus(&vs[1]);
        let c = e.express(&target).unwrap();
        assert_eq!(c.coeff(&0), q(3));
        assert_eq!(c.coeff(&1), q(-1));
    }
}
