//! Linear combinations, the operad interface, suspension and the axiom checker.

use crate::exactalg::{all_perms, q, sign, Perm, Q};
use num::{One, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt::Debug;
use std::hash::Hash;

/// A finite ℚ-linear combination of basis symbols. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Elem<B: Ord> {
    terms: BTreeMap<B, Q>,
}

impl<B: Ord + Debug> Debug for Elem<B> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (b, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({})·{:?}", crate::exactalg::fmt_q(c), b)?;
        }
        Ok(())
    }
}

impl<B: Ord> Default for Elem<B> {
    fn default() -> Self {
        Elem { terms: BTreeMap::new() }
    }
}

impl<B: Ord + Clone> Elem<B> {
    pub fn zero() -> Self {
        Elem { terms: BTreeMap::new() }
    }

    pub fn basis(b: B) -> Self {
        Self::term(b, Q::one())
    }

    pub fn term(b: B, c: Q) -> Self {
        let mut e = Self::zero();
        e.add_term(b, c);
        e
    }

    pub fn from_terms(it: impl IntoIterator<Item = (B, Q)>) -> Self {
        let mut e = Self::zero();
        for (b, c) in it {
            e.add_term(b, c);
        }
        e
    }

    pub fn add_term(&mut self, b: B, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(b) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Elem<B>, c: &Q) {
        if c.is_zero() {
            return;
        }
        for (b, x) in &other.terms {
            self.add_term(b.clone(), x * c);
        }
    }

    pub fn add_assign(&mut self, other: &Elem<B>) {
        for (b, x) in &other.terms {
            self.add_term(b.clone(), x.clone());
        }
    }

    pub fn plus(&self, other: &Elem<B>) -> Elem<B> {
        let mut e = self.clone();
        e.add_assign(other);
        e
    }

    pub fn minus(&self, other: &Elem<B>) -> Elem<B> {
        let mut e = self.clone();
        e.add_scaled(other, &-Q::one());
        e
    }

    pub fn scale(&self, c: &Q) -> Elem<B> {
        if c.is_zero() {
            return Self::zero();
        }
        Elem { terms: self.terms.iter().map(|(b, x)| (b.clone(), x * c)).collect() }
    }

    pub fn neg(&self) -> Elem<B> {
        self.scale(&-Q::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, b: &B) -> Q {
        self.terms.get(b).cloned().unwrap_or_else(Q::zero)
    }

    /// The largest basis symbol with its coefficient.
    pub fn last(&self) -> Option<(&B, &Q)> {
        self.terms.iter().next_back()
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = (&B, &Q)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> BTreeMap<B, Q> {
        self.terms
    }

    pub fn retain(&mut self, mut keep: impl FnMut(&B) -> bool) {
        self.terms.retain(|b, _| keep(b));
    }

    /// Extend a map on basis symbols linearly.
    pub fn map_linear<C: Ord + Clone>(&self, mut f: impl FnMut(&B) -> Elem<C>) -> Elem<C> {
        let mut out = Elem::zero();
        for (b, c) in &self.terms {
            out.add_scaled(&f(b), c);
        }
        out
    }

    /// Relabel basis symbols with a sign or coefficient.
    pub fn map_basis<C: Ord + Clone>(&self, mut f: impl FnMut(&B) -> (C, Q)) -> Elem<C> {
        let mut out = Elem::zero();
        for (b, c) in &self.terms {
            let (b2, s) = f(b);
            out.add_term(b2, s * c);
        }
        out
    }

    pub fn bilinear<C: Ord + Clone, D: Ord + Clone>(
        &self,
        other: &Elem<C>,
        mut f: impl FnMut(&B, &C) -> Elem<D>,
    ) -> Elem<D> {
        let mut out = Elem::zero();
        for (b, x) in &self.terms {
            for (c, y) in &other.terms {
                out.add_scaled(&f(b, c), &(x * y));
            }
        }
        out
    }
}

/// A graded operad with a chosen basis in each arity.
///
/// `phi(n)` is the image of the ΛLie∞ generator of arity n under the structure
/// map ΛLie∞ → O (zero when the operad is not under ΛLie∞).
pub trait Operad {
    type B: Clone + Ord + Eq + Hash + Debug;

    fn name(&self) -> String;
    fn arity(&self, b: &Self::B) -> usize;
    fn degree(&self, b: &Self::B) -> i64;
    fn compose(&self, f: &Self::B, i: usize, g: &Self::B) -> Elem<Self::B>;
    fn act(&self, s: &Perm, f: &Self::B) -> Elem<Self::B>;
    fn unit(&self) -> Self::B;
    fn diff(&self, _f: &Self::B) -> Elem<Self::B> {
        Elem::zero()
    }
    /// Whether `diff` may be nonzero.
    fn has_diff(&self) -> bool {
        false
    }
    /// All basis symbols of arity n, or None when the slice is not enumerable.
    fn basis(&self, n: usize) -> Option<Vec<Self::B>>;
    fn phi(&self, _n: usize) -> Elem<Self::B> {
        Elem::zero()
    }
    /// A spanning set of homogeneous vectors in arity n. Defaults to the basis symbols.
    fn basis_elems(&self, n: usize) -> Option<Vec<Elem<Self::B>>> {
        self.basis(n).map(|v| v.into_iter().map(Elem::basis).collect())
    }

    fn compose_elem(&self, f: &Elem<Self::B>, i: usize, g: &Elem<Self::B>) -> Elem<Self::B> {
        f.bilinear(g, |a, b| self.compose(a, i, b))
    }
    fn act_elem(&self, s: &Perm, f: &Elem<Self::B>) -> Elem<Self::B> {
        f.map_linear(|b| self.act(s, b))
    }
    fn diff_elem(&self, f: &Elem<Self::B>) -> Elem<Self::B> {
        f.map_linear(|b| self.diff(b))
    }
}

/// Degree of a homogeneous element (None for zero or inhomogeneous input).
pub fn elem_degree<O: Operad>(op: &O, e: &Elem<O::B>) -> Option<i64> {
    let mut d = None;
    for (b, _) in e.iter() {
        let db = op.degree(b);
        match d {
            None => d = Some(db),
            Some(x) if x != db => return None,
            _ => {}
        }
    }
    d
}

pub fn elem_arity<O: Operad>(op: &O, e: &Elem<O::B>) -> Option<usize> {
    e.iter().next().map(|(b, _)| op.arity(b))
}

/// Average over S_n: Σ_σ σ·x.
pub fn symmetrize<O: Operad>(op: &O, x: &Elem<O::B>, n: usize) -> Elem<O::B> {
    let mut out = Elem::zero();
    for s in all_perms(n) {
        out.add_assign(&op.act_elem(&s, x));
    }
    out
}

/// δ_b(a) = b∘₁a − (−1)^{|a||b|} Σᵢ a∘ᵢb for b of arity 1.
pub fn intrinsic_derivation<O: Operad>(
    op: &O,
    b: &Elem<O::B>,
    a: &Elem<O::B>,
) -> Result<Elem<O::B>, crate::Error> {
    if b.is_zero() || a.is_zero() {
        return Ok(Elem::zero());
    }
    if elem_arity(op, b) != Some(1) {
        return Err(crate::Error::Arity("intrinsic derivation needs an arity-1 element".into()));
    }
    let mut out = Elem::zero();
    for (bb, cb) in b.iter() {
        for (aa, ca) in a.iter() {
            let c = cb * ca;
            out.add_scaled(&op.compose(bb, 1, aa), &c);
            let s = sign(op.degree(aa) * op.degree(bb) % 2 != 0);
            for i in 1..=op.arity(aa) {
                out.add_scaled(&op.compose(aa, i, bb), &(-&s * &c));
            }
        }
    }
    Ok(out)
}

/// Λ^k O: O(n) regraded by k(1−n) and twisted by sgn^k.
#[derive(Clone, Debug)]
pub struct Suspend<O: Operad> {
    pub inner: O,
    pub k: i64,
    phi: Vec<Elem<O::B>>,
    label: Option<String>,
}

impl<O: Operad> Suspend<O> {
    pub fn new(inner: O, k: i64) -> Self {
        Suspend { inner, k, phi: Vec::new(), label: None }
    }

    /// Attach ΛLie∞ generator images, indexed by arity.
    pub fn with_phi(mut self, phi: Vec<Elem<O::B>>) -> Self {
        self.phi = phi;
        self
    }

    pub fn named(mut self, name: &str) -> Self {
        self.label = Some(name.to_string());
        self
    }
}

impl<O: Operad> Operad for Suspend<O> {
    type B = O::B;

    fn name(&self) -> String {
        self.label.clone().unwrap_or_else(|| format!("Λ^{}{}", self.k, self.inner.name()))
    }
    fn arity(&self, b: &O::B) -> usize {
        self.inner.arity(b)
    }
    fn degree(&self, b: &O::B) -> i64 {
        self.inner.degree(b) + self.k * (1 - self.inner.arity(b) as i64)
    }
    fn compose(&self, f: &O::B, i: usize, g: &O::B) -> Elem<O::B> {
        let r = self.inner.compose(f, i, g);
        if self.k % 2 == 0 {
            return r;
        }
        let n = self.inner.arity(f) as i64;
        let m = self.inner.arity(g) as i64;
        let odd = ((1 - n) * self.inner.degree(g) + (m - 1) * (i as i64 - 1)).rem_euclid(2) == 1;
        if odd {
            r.neg()
        } else {
            r
        }
    }
    fn act(&self, s: &Perm, f: &O::B) -> Elem<O::B> {
        let r = self.inner.act(s, f);
        if self.k % 2 != 0 && s.is_odd() {
            r.neg()
        } else {
            r
        }
    }
    fn unit(&self) -> O::B {
        self.inner.unit()
    }
    fn diff(&self, f: &O::B) -> Elem<O::B> {
        self.inner.diff(f)
    }
    fn has_diff(&self) -> bool {
        self.inner.has_diff()
    }
    fn basis(&self, n: usize) -> Option<Vec<O::B>> {
        self.inner.basis(n)
    }
    fn phi(&self, n: usize) -> Elem<O::B> {
        self.phi.get(n).cloned().unwrap_or_default()
    }
}

/// Λ^{k'}(Λ^k O) ≅ Λ^{k+k'} O on basis symbols: the sign (−1)^{kk'(n−1)(n−2)/2}.
pub fn suspension_iso_sign(k: i64, k2: i64, n: usize) -> Q {
    let n = n as i64;
    sign((k * k2 * (n - 1) * (n - 2) / 2).rem_euclid(2) == 1)
}

/// σ ∘ᵢ id_m: σ ∈ S_n with letter i expanded into m consecutive letters.
pub fn block_perm(s: &Perm, i: usize, m: usize) -> Perm {
    let n = s.len();
    let si = s.apply(i);
    let expand = |v: usize| -> usize {
        if v < si {
            v
        } else {
            v + m - 1
        }
    };
    let mut img = Vec::with_capacity(n + m - 1);
    for j in 1..=n {
        if j == i {
            for k in 0..m {
                img.push(si + k);
            }
        } else {
            img.push(expand(s.apply(j)));
        }
    }
    Perm::from_images(&img)
}

#[derive(Clone, Debug, Serialize)]
pub struct Failure {
    pub law: String,
    pub witness: String,
}

#[derive(Clone, Debug, Serialize, Default)]
pub struct AxiomReport {
    pub operad: String,
    pub max_arity: usize,
    pub checks: usize,
    pub failures: Vec<Failure>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
    fn record(&mut self, ok: bool, law: &str, witness: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok && self.failures.len() < 20 {
            self.failures.push(Failure { law: law.to_string(), witness: witness() });
        }
    }
}

/// Exhaustive on small bases, otherwise `samples` seeded random choices per law.
/// Works on the spanning vectors from `basis_elems`, so operads whose natural
/// basis consists of invariant combinations are checked the same way.
pub fn check_operad_axioms<O: Operad>(op: &O, max_arity: usize, samples: usize, seed: u64) -> AxiomReport {
    let mut rep = AxiomReport { operad: op.name(), max_arity, ..Default::default() };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bases: Vec<Vec<Elem<O::B>>> = (0..=max_arity).map(|n| op.basis_elems(n).unwrap_or_default()).collect();
    let u = op.unit();
    rep.record(op.arity(&u) == 1 && op.degree(&u) == 0, "unit arity and degree", || format!("{:?}", u));
    let ue = Elem::basis(u);
    let deg = |e: &Elem<O::B>| elem_degree(op, e).unwrap_or(0);
    let cap = samples.max(1);

    for n in 1..=max_arity {
        for f in pick(&bases[n], &mut rng, cap) {
            rep.record(elem_degree(op, &f).is_some(), "basis vectors are homogeneous", || format!("{:?}", f));
            rep.record(op.compose_elem(&ue, 1, &f) == f, "left unit", || format!("{:?}", f));
            for i in 1..=n {
                rep.record(op.compose_elem(&f, i, &ue) == f, "right unit", || format!("{:?} at {}", f, i));
            }
            let perms = all_perms(n);
            for s in pick(&perms, &mut rng, 6) {
                for t in pick(&perms, &mut rng, 3) {
                    let lhs = op.act_elem(&s, &op.act_elem(&t, &f));
                    let rhs = op.act_elem(&s.compose(&t), &f);
                    rep.record(lhs == rhs, "action is a left action", || format!("{:?} {:?} {:?}", s, t, f));
                }
            }
            if op.has_diff() {
                let d = op.diff_elem(&f);
                rep.record(op.diff_elem(&d).is_zero(), "d^2 = 0", || format!("{:?}", f));
                let df = deg(&f);
                rep.record(
                    d.iter().all(|(b, _)| op.degree(b) == df + 1 && op.arity(b) == n),
                    "differential has degree +1",
                    || format!("{:?}", f),
                );
                for s in pick(&perms, &mut rng, 4) {
                    let lhs = op.diff_elem(&op.act_elem(&s, &f));
                    let rhs = op.act_elem(&s, &d);
                    rep.record(lhs == rhs, "differential is equivariant", || format!("{:?} {:?}", s, f));
                }
            }
        }
    }

    for n in 1..=max_arity {
        for m in 1..=max_arity + 1 - n {
            let fs = pick(&bases[n], &mut rng, cap);
            for f in &fs {
                let gs = pick(&bases[m], &mut rng, cap.min(8));
                for g in &gs {
                    let (df, dg) = (deg(f), deg(g));
                    let i = 1 + (rng_index(&mut rng, n));
                    let fg = op.compose_elem(f, i, g);
                    rep.record(
                        fg.iter().all(|(b, _)| op.degree(b) == df + dg && op.arity(b) == n + m - 1),
                        "composition is graded",
                        || format!("{:?} o{} {:?}", f, i, g),
                    );
                    // equivariance in the outer and inner argument
                    let perms_n = all_perms(n);
                    for s in pick(&perms_n, &mut rng, 3) {
                        let lhs = op.compose_elem(&op.act_elem(&s, f), s.apply(i), g);
                        let rhs = op.act_elem(&block_perm(&s, i, m), &fg);
                        rep.record(lhs == rhs, "outer equivariance", || format!("{:?} {:?} o{} {:?}", s, f, i, g));
                    }
                    let perms_m = all_perms(m);
                    for t in pick(&perms_m, &mut rng, 3) {
                        let lhs = op.compose_elem(f, i, &op.act_elem(&t, g));
                        let big = Perm::identity(i - 1).direct_sum(&t).extend(n + m - 1);
                        let rhs = op.act_elem(&big, &fg);
                        rep.record(lhs == rhs, "inner equivariance", || format!("{:?} o{} {:?}{:?}", f, i, t, g));
                    }
                    if op.has_diff() {
                        let lhs = op.diff_elem(&fg);
                        let mut rhs = op.compose_elem(&op.diff_elem(f), i, g);
                        rhs.add_scaled(&op.compose_elem(f, i, &op.diff_elem(g)), &sign(df % 2 != 0));
                        rep.record(lhs == rhs, "Leibniz rule", || format!("{:?} o{} {:?}", f, i, g));
                    }
                    for k in 1..=max_arity + 2 - n - m {
                        if n + m + k - 2 > max_arity {
                            continue;
                        }
                        let hs = pick(&bases[k], &mut rng, 2);
                        for h in &hs {
                            // nested: f∘ᵢ(g∘ⱼh) = (f∘ᵢg)∘_{i+j−1}h
                            let j = 1 + rng_index(&mut rng, m);
                            let lhs = op.compose_elem(f, i, &op.compose_elem(g, j, h));
                            let rhs = op.compose_elem(&fg, i + j - 1, h);
                            rep.record(lhs == rhs, "nested associativity", || {
                                format!("{:?} o{} ({:?} o{} {:?})", f, i, g, j, h)
                            });
                            // disjoint: (f∘ᵢg)∘_{j+m−1}h = (−1)^{|g||h|}(f∘ⱼh)∘ᵢg, i < j
                            if n >= 2 {
                                let (a, b) = two_slots(&mut rng, n);
                                let lhs = op.compose_elem(&op.compose_elem(f, a, g), b + m - 1, h);
                                let s = sign(dg * deg(h) % 2 != 0);
                                let rhs = op.compose_elem(&op.compose_elem(f, b, h), a, g).scale(&s);
                                rep.record(lhs == rhs, "disjoint associativity", || {
                                    format!("({:?} o{} {:?}) o{} {:?}", f, a, g, b + m - 1, h)
                                });
                            }
                        }
                    }
                }
            }
        }
    }
    rep
}

/// All of `v` when short, else a seeded sample of size k.
fn pick<T: Clone>(v: &[T], rng: &mut ChaCha8Rng, k: usize) -> Vec<T> {
    if v.len() <= k {
        v.to_vec()
    } else {
        v.choose_multiple(rng, k).cloned().collect()
    }
}

fn rng_index(rng: &mut ChaCha8Rng, n: usize) -> usize {
    use rand::Rng;
    rng.gen_range(0..n)
}

fn two_slots(rng: &mut ChaCha8Rng, n: usize) -> (usize, usize) {
    let a = 1 + rng_index(rng, n - 1);
    let b = a + 1 + rng_index(rng, n - a);
    (a, b)
}

/// Unit ±1 as a rational, convenience for sign tables.
pub fn pm(odd: bool) -> Q {
    sign(odd)
}

pub fn one() -> Q {
    q(1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn elem_cancels_and_drops_zeros() {
        let mut e: Elem<u8> = Elem::term(1, q(2));
        e.add_term(1, q(-2));
        assert!(e.is_zero());
        e.add_term(3, q(0));
        assert!(e.is_empty());
        let a = Elem::from_terms([(1u8, q(1)), (2, q(3))]);
        assert_eq!(a.minus(&a), Elem::zero());
        assert_eq!(a.scale(&q(2)).coeff(&2), q(6));
    }

    #[test]
    fn block_perm_expands_slot() {
        let s = Perm::from_images(&[2, 1]);
        assert_eq!(block_perm(&s, 1, 2).images(), vec![2, 3, 1]);
        assert_eq!(block_perm(&s, 2, 2).images(), vec![3, 1, 2]);
        assert!(block_perm(&Perm::identity(3), 2, 3).is_identity());
    }

    #[test]
    fn iso_sign_small_cases() {
        assert_eq!(suspension_iso_sign(1, 1, 3), q(-1));
        assert_eq!(suspension_iso_sign(1, 1, 2), q(1));
        assert_eq!(suspension_iso_sign(2, 1, 3), q(1));
    }
}
