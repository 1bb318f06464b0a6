//! Finite degree windows of the complexes the quasi-isomorphism claims are
//! about, and the reports built from them.

use crate::brace::{br_diff, enumerate, twbt_diff, BraceTree};
use crate::homology::{assemble, quasi_iso_check, rank, ChainComplexSlice, QuasiIsoReport};
use crate::operad::{elem_degree, Elem, Operad};
use crate::twisting::{Tw, TB};
use crate::Error;
use serde::Serialize;

/// O(n) graded by degree, on the window d_min..=d_max.
pub fn operad_slice<O: Operad>(op: &O, n: usize, d_min: i64, d_max: i64) -> Result<ChainComplexSlice<O::B>, Error> {
    let basis = op.basis(n).ok_or_else(|| Error::Precondition(format!("{} has no finite basis", op.name())))?;
    assemble(
        d_min,
        d_max,
        |d| basis.iter().filter(|b| op.degree(b) == d).map(|b| Elem::basis(b.clone())).collect(),
        |x| op.diff_elem(x),
    )
}

/// TwO(n) on a window; the neutral cap must cover every r reachable in
/// degrees ≤ d_max for the answer to be exact.
pub fn tw_slice<O: Operad>(tw: &Tw<O>, n: usize, d_min: i64, d_max: i64) -> Result<ChainComplexSlice<TB<O>>, Error> {
    assemble(d_min, d_max, |d| tw.basis_in_degree(n, d), |x| tw.diff_elem(x))
}

fn degree_range<O: Operad>(op: &O, n: usize) -> Result<(i64, i64), Error> {
    let b = op.basis(n).ok_or_else(|| Error::Precondition(format!("{} has no finite basis", op.name())))?;
    let lo = b.iter().map(|x| op.degree(x)).min().unwrap_or(0);
    let hi = b.iter().map(|x| op.degree(x)).max().unwrap_or(0);
    Ok((lo, hi))
}

/// η: TwO(n) → O(n) on the window one degree beyond O(n) on each side.
pub fn eta_quasi_iso<O: Operad + Clone>(op: &O, n: usize, cap: usize) -> Result<QuasiIsoReport, Error> {
    let (lo, hi) = degree_range(op, n)?;
    let tw = Tw::new(op.clone(), cap);
    let src = tw_slice(&tw, n, lo - 1, hi + 1)?;
    let tgt = operad_slice(op, n, lo - 1, hi + 1)?;
    Ok(quasi_iso_check(&src, &tgt, |x| tw.eta(x)))
}

/// Brace trees of arity n, r neutral vertices with r + 1 − n = d.
fn trees_in_degree(n: usize, d: i64, admissible_only: bool) -> Vec<Elem<BraceTree>> {
    let r = d + n as i64 - 1;
    if r < 0 {
        return Vec::new();
    }
    enumerate(n, r as usize)
        .into_iter()
        .filter(|t| !admissible_only || t.is_admissible())
        .map(Elem::basis)
        .collect()
}

pub fn twbt_slice(n: usize, d_min: i64, d_max: i64) -> Result<ChainComplexSlice<BraceTree>, Error> {
    assemble(d_min, d_max, |d| trees_in_degree(n, d, false), |x| x.map_linear(twbt_diff))
}

pub fn br_slice(n: usize, d_min: i64, d_max: i64) -> Result<ChainComplexSlice<BraceTree>, Error> {
    assemble(
        d_min,
        d_max,
        |d| trees_in_degree(n, d, true),
        |x| x.map_linear(|t| br_diff(t).expect("admissible basis")),
    )
}

/// Br(n) ↪ TwBT(n) on degrees 1−n..=0, where Br(n) lives.
pub fn br_twbt_quasi_iso(n: usize) -> Result<QuasiIsoReport, Error> {
    let (lo, hi) = (-(n as i64), 1);
    let src = br_slice(n, lo, hi)?;
    let tgt = twbt_slice(n, lo, hi)?;
    Ok(quasi_iso_check(&src, &tgt, |x| x.clone()))
}

/// The zero map ΛLie∞ → As makes TwAs and TwTwAs complexes with zero
/// differential. Σ_{S_r×S_s} σ(v) for v ∈ As(r+s+n) is then a nonzero class
/// that η_{TwAs} kills, so η is not a quasi-isomorphism.
#[derive(Clone, Debug, Serialize)]
pub struct NonFixedWitness {
    pub r: usize,
    pub s: usize,
    pub n: usize,
    pub cocycle: bool,
    pub nonzero_class: bool,
    pub killed_by_eta: bool,
    pub eta: QuasiIsoReport,
}

impl NonFixedWitness {
    /// The control succeeds when it exhibits the failure.
    pub fn exhibits_failure(&self) -> bool {
        self.cocycle && self.nonzero_class && self.killed_by_eta && !self.eta.passed()
    }
}

pub fn non_fixed_point_witness(r: usize, s: usize, n: usize) -> Result<NonFixedWitness, Error> {
    let as_op = crate::classical::As;
    let tw = Tw::new(as_op, r.max(s));
    let twtw = Tw::new(Tw::new(as_op, r.max(s)), r.max(s));
    let v: Vec<u8> = (1..=(r + s + n) as u8).collect();
    // σ ∈ S_r on the outer neutral slots, S_s on the inner ones
    let inner = tw.invariant(s, &Elem::basis(v));
    let x = twtw.invariant(r, &inner);
    let deg = elem_degree(&twtw, &x).ok_or_else(|| Error::Precondition("witness is not homogeneous".into()))?;
    let cocycle = twtw.diff_elem(&x).is_zero();
    let slice = tw_slice(&twtw, n, deg - 1, deg + 1)?;
    let bnd = slice.coboundaries(deg);
    let nonzero_class = rank(&[bnd.clone(), vec![x.clone()]].concat()) > rank(&bnd);
    let killed_by_eta = twtw.eta(&x).is_zero();
    let tgt = tw_slice(&tw, n, deg - 1, deg + 1)?;
    let eta = quasi_iso_check(&slice, &tgt, |y| twtw.eta(y));
    Ok(NonFixedWitness { r, s, n, cocycle, nonzero_class, killed_by_eta, eta })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::{lambda_as, Ger};

    #[test]
    fn br_two_cohomology() {
        let c = br_slice(2, -2, 1).unwrap();
        let h = c.cohomology_dims();
        assert_eq!(h.values().sum::<usize>(), 2);
        assert_eq!(h[&-1], 1);
        assert_eq!(h[&0], 1);
    }

    #[test]
    fn br_into_twbt_low_arity() {
        for n in 1..=3 {
            let rep = br_twbt_quasi_iso(n).unwrap();
            assert!(rep.passed(), "{rep:?}");
        }
    }

    #[test]
    fn eta_quasi_iso_ger_and_lambda_as() {
        for n in 1..=3 {
            assert!(eta_quasi_iso(&Ger, n, n).unwrap().passed());
            assert!(eta_quasi_iso(&lambda_as(), n, n + 1).unwrap().passed());
        }
    }

    #[test]
    fn zero_map_gives_non_fixed_point() {
        let w = non_fixed_point_witness(1, 1, 1).unwrap();
        assert!(w.exhibits_failure(), "{w:?}");
        let w = non_fixed_point_witness(2, 1, 1).unwrap();
        assert!(w.exhibits_failure(), "{w:?}");
    }
}
