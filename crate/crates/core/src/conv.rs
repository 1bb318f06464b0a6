//! The convolution pre-Lie algebra Conv(D*, P) and Maurer-Cartan elements.
//!
//! A map f: D*(n) → P(n) is stored as Σ f(w*) ⊗ w over a basis w of D(n). In
//! the invariant form the sum is S_n-fixed; the coinvariant form keeps one
//! representative per orbit and `av` recovers the invariant vector.

use crate::cobar::{eval_morphism, CNode, Cobar};
use crate::exactalg::{all_perms, multi_shuffles, sign};
use crate::operad::{Elem, Operad};
use std::collections::{BTreeMap, HashMap};

pub type Pair<P, D> = (<P as Operad>::B, <D as Operad>::B);

/// Per-arity components of an element of Conv(D*, P).
pub struct Conv<P: Operad, D: Operad> {
    pub comps: BTreeMap<usize, Elem<Pair<P, D>>>,
}

impl<P: Operad, D: Operad> Clone for Conv<P, D> {
    fn clone(&self) -> Self {
        Conv { comps: self.comps.clone() }
    }
}

impl<P: Operad, D: Operad> std::fmt::Debug for Conv<P, D> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_map().entries(self.comps.iter()).finish()
    }
}

impl<P: Operad, D: Operad> PartialEq for Conv<P, D> {
    fn eq(&self, other: &Self) -> bool {
        let keys: std::collections::BTreeSet<&usize> = self.comps.keys().chain(other.comps.keys()).collect();
        keys.into_iter().all(|k| {
            let z = Elem::zero();
            self.comps.get(k).unwrap_or(&z) == other.comps.get(k).unwrap_or(&z)
        })
    }
}

impl<P: Operad, D: Operad> Default for Conv<P, D> {
    fn default() -> Self {
        Conv { comps: BTreeMap::new() }
    }
}

impl<P: Operad, D: Operad> Conv<P, D> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn add_at(&mut self, n: usize, e: &Elem<Pair<P, D>>) {
        self.comps.entry(n).or_default().add_assign(e);
        if self.comps[&n].is_zero() {
            self.comps.remove(&n);
        }
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (n, e) in &other.comps {
            out.add_at(*n, e);
        }
        out
    }

    pub fn scale(&self, c: &crate::Q) -> Self {
        let mut out = Self::zero();
        for (n, e) in &self.comps {
            out.add_at(*n, &e.scale(c));
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.comps.values().all(|e| e.is_zero())
    }

    pub fn truncate(&self, max_arity: usize) -> Self {
        Conv { comps: self.comps.iter().filter(|(n, _)| **n <= max_arity).map(|(n, e)| (*n, e.clone())).collect() }
    }

    pub fn component(&self, n: usize) -> Elem<Pair<P, D>> {
        self.comps.get(&n).cloned().unwrap_or_default()
    }
}

fn pair_degree<P: Operad, D: Operad>(p: &P, d: &D, x: &Pair<P, D>) -> i64 {
    p.degree(&x.0) + d.degree(&x.1)
}

/// Degree of a homogeneous element; None if zero or inhomogeneous.
pub fn conv_degree<P: Operad, D: Operad>(p: &P, d: &D, x: &Conv<P, D>) -> Option<i64> {
    let mut deg = None;
    for e in x.comps.values() {
        for (t, _) in e.iter() {
            let k = pair_degree(p, d, t);
            if deg.is_some_and(|x| x != k) {
                return None;
            }
            deg = Some(k);
        }
    }
    deg
}

fn tensor<P: Operad, D: Operad>(v: &Elem<P::B>, w: &Elem<D::B>) -> Elem<Pair<P, D>> {
    v.bilinear(w, |a, b| Elem::basis((a.clone(), b.clone())))
}

/// σ(v ⊗ w) = σv ⊗ σw.
pub fn act_pair<P: Operad, D: Operad>(p: &P, d: &D, s: &crate::Perm, x: &Elem<Pair<P, D>>) -> Elem<Pair<P, D>> {
    let mut out = Elem::zero();
    for ((v, w), c) in x.iter() {
        out.add_scaled(&tensor::<P, D>(&p.act(s, v), &d.act(s, w)), c);
    }
    out
}

/// (X•Y)_N = Σ (−1)^{|v′||w|} Σ_{σ∈Sh_{m,n−1}} σ(v∘₁v′) ⊗ σ(w∘₁w′).
pub fn prelie<P: Operad, D: Operad>(p: &P, d: &D, x: &Conv<P, D>, y: &Conv<P, D>, max_arity: usize) -> Conv<P, D> {
    let mut out = Conv::zero();
    for (&n, xe) in &x.comps {
        for (&m, ye) in &y.comps {
            let big = n + m - 1;
            if big > max_arity || n == 0 || m == 0 {
                continue;
            }
            let sh = multi_shuffles(&[m, n - 1]);
            let mut acc = Elem::zero();
            for ((v, w), cx) in xe.iter() {
                for ((v2, w2), cy) in ye.iter() {
                    let s = sign((p.degree(v2) * d.degree(w)).rem_euclid(2) == 1);
                    let left = p.compose(v, 1, v2);
                    if left.is_zero() {
                        continue;
                    }
                    let right = d.compose(w, 1, w2);
                    let t = tensor::<P, D>(&left, &right);
                    let c = s * cx * cy;
                    for sg in &sh {
                        acc.add_scaled(&act_pair(p, d, sg, &t), &c);
                    }
                }
            }
            out.add_at(big, &acc);
        }
    }
    out
}

/// X•′Y = Σᵢ (−1)^{|v′||w|} v∘ᵢv′ ⊗ w∘ᵢw′ on coinvariant representatives.
pub fn prelie_coinv<P: Operad, D: Operad>(p: &P, d: &D, x: &Conv<P, D>, y: &Conv<P, D>, max_arity: usize) -> Conv<P, D> {
    let mut out = Conv::zero();
    for (&n, xe) in &x.comps {
        for (&m, ye) in &y.comps {
            let big = n + m - 1;
            if big > max_arity || n == 0 || m == 0 {
                continue;
            }
            let mut acc = Elem::zero();
            for ((v, w), cx) in xe.iter() {
                for ((v2, w2), cy) in ye.iter() {
                    let s = sign((p.degree(v2) * d.degree(w)).rem_euclid(2) == 1);
                    let c = s * cx * cy;
                    for i in 1..=n {
                        let left = p.compose(v, i, v2);
                        if left.is_zero() {
                            continue;
                        }
                        acc.add_scaled(&tensor::<P, D>(&left, &d.compose(w, i, w2)), &c);
                    }
                }
            }
            out.add_at(big, &acc);
        }
    }
    out
}

/// Av(v⊗w) = Σ_σ σv ⊗ σw.
pub fn av<P: Operad, D: Operad>(p: &P, d: &D, x: &Conv<P, D>) -> Conv<P, D> {
    let mut out = Conv::zero();
    for (&n, e) in &x.comps {
        let mut acc = Elem::zero();
        for s in all_perms(n) {
            acc.add_assign(&act_pair(p, d, &s, e));
        }
        out.add_at(n, &acc);
    }
    out
}

/// [X,Y] = X•Y − (−1)^{|X||Y|} Y•X.
pub fn bracket<P: Operad, D: Operad>(p: &P, d: &D, x: &Conv<P, D>, y: &Conv<P, D>, max_arity: usize) -> Conv<P, D> {
    let dx = conv_degree(p, d, x).unwrap_or(0);
    let dy = conv_degree(p, d, y).unwrap_or(0);
    prelie(p, d, x, y, max_arity).plus(&prelie(p, d, y, x, max_arity).scale(&-sign((dx * dy).rem_euclid(2) == 1)))
}

/// ∂ acts on the first factor.
pub fn conv_diff<P: Operad, D: Operad>(p: &P, x: &Conv<P, D>) -> Conv<P, D> {
    let mut out = Conv::zero();
    if !p.has_diff() {
        return out;
    }
    for (&n, e) in &x.comps {
        let mut acc = Elem::zero();
        for ((v, w), c) in e.iter() {
            acc.add_scaled(&tensor::<P, D>(&p.diff(v), &Elem::basis(w.clone())), c);
        }
        out.add_at(n, &acc);
    }
    out
}

/// ∂X + X•X up to `max_arity`.
pub fn mc_residual<P: Operad, D: Operad>(
    p: &P,
    d: &D,
    x: &Conv<P, D>,
    with_differential: bool,
    max_arity: usize,
) -> Result<Conv<P, D>, crate::Error> {
    if let Some(k) = conv_degree(p, d, x) {
        if k != 1 {
            return Err(crate::Error::Precondition(format!("MC element must have degree 1, got {}", k)));
        }
    }
    let mut r = prelie(p, d, x, x, max_arity);
    if with_differential {
        r = r.plus(&conv_diff(p, &x.truncate(max_arity)));
    }
    Ok(r)
}

/// The element Σ_w F(sw*) ⊗ w of a map F given on generators.
pub fn from_generators<P: Operad, D: Operad>(
    cb: &Cobar<D>,
    max_arity: usize,
    mut image: impl FnMut(&D::B) -> Elem<P::B>,
) -> Conv<P, D> {
    let mut out = Conv::zero();
    for n in 2..=max_arity {
        let mut acc = Elem::zero();
        for w in cb.d_basis(n).iter() {
            acc.add_assign(&tensor::<P, D>(&image(w), &Elem::basis(w.clone())));
        }
        out.add_at(n, &acc);
    }
    out
}

/// A morphism Cobar(D*) → P recovered from an MC element, truncated at its arity cutoff.
pub struct CobarMorphism<P: Operad, D: Operad> {
    pub images: HashMap<D::B, Elem<P::B>>,
    pub max_arity: usize,
}

impl<P: Operad, D: Operad> CobarMorphism<P, D> {
    pub fn image(&self, w: &D::B) -> Elem<P::B> {
        self.images.get(w).cloned().unwrap_or_default()
    }

    pub fn eval(&self, target: &P, t: &CNode<D::B>) -> Elem<P::B> {
        eval_morphism::<D, P>(t, &mut |w| self.image(w), target)
    }

    pub fn eval_elem(&self, target: &P, x: &Elem<CNode<D::B>>) -> Elem<P::B> {
        x.map_linear(|t| self.eval(target, t))
    }

    pub fn to_conv(&self, cb: &Cobar<D>) -> Conv<P, D> {
        from_generators(cb, self.max_arity, |w| self.image(w))
    }
}

/// Read generator images off an MC element; refuses when the residual is nonzero.
pub fn morphism_from_mc<P: Operad, D: Operad>(
    p: &P,
    d: &D,
    x: &Conv<P, D>,
    max_arity: usize,
) -> Result<CobarMorphism<P, D>, crate::Error> {
    let r = mc_residual(p, d, x, true, max_arity)?;
    if let Some((n, _)) = r.comps.iter().find(|(_, e)| !e.is_zero()) {
        return Err(crate::Error::Precondition(format!("MC residual is nonzero in arity {}", n)));
    }
    let mut images: HashMap<D::B, Elem<P::B>> = HashMap::new();
    for (n, e) in &x.comps {
        if *n > max_arity {
            continue;
        }
        for ((v, w), c) in e.iter() {
            images.entry(w.clone()).or_default().add_term(v.clone(), c.clone());
        }
    }
    Ok(CobarMorphism { images, max_arity })
}

/// ∂_P F(x) − F(∂x) on all generators up to the cutoff, as (generator, defect) pairs.
pub fn chain_map_defects<P: Operad, D: Operad>(
    cb: &Cobar<D>,
    target: &P,
    f: &CobarMorphism<P, D>,
) -> Vec<(D::B, Elem<P::B>)> {
    let mut out = Vec::new();
    for n in 2..=f.max_arity {
        let diffs = cb.gen_diffs(n);
        for w in cb.d_basis(n).iter() {
            let lhs = target.diff_elem(&f.image(w));
            let rhs = diffs.get(w).map(|e| f.eval_elem(target, e)).unwrap_or_default();
            let defect = lhs.minus(&rhs);
            if !defect.is_zero() {
                out.push((w.clone(), defect));
            }
        }
    }
    out
}

/// U_Ger: Ger∞ → Ger, s(b₁b₂)* ↦ {a₁,a₂}, s{b₁,b₂}* ↦ a₁a₂, higher generators ↦ 0.
pub fn u_ger(max_arity: usize) -> CobarMorphism<crate::classical::Ger, crate::operad::Suspend<crate::classical::Ger>> {
    use crate::classical::GerMono;
    let bracket = GerMono(vec![vec![1, 2]]);
    let mut images = HashMap::new();
    images.insert(GerMono::product(2), Elem::basis(bracket.clone()));
    images.insert(bracket, Elem::basis(GerMono::product(2)));
    CobarMorphism { images, max_arity }
}

/// Σ_w sw* ⊗ w, the canonical element of Conv(D*, Cobar(D*)).
pub fn canonical_xi<D: Operad>(cb: &Cobar<D>, max_arity: usize) -> Conv<Cobar<D>, D> {
    from_generators(cb, max_arity, |w| Elem::basis(CNode::corolla(w.clone(), cb.d.arity(w))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::{Ger, GerMono, LaLie};
    use crate::cobar::{ger_inf, lalie_inf};
    use crate::exactalg::q;
    use rand::{Rng, SeedableRng};

    #[test]
    fn canonical_element_is_mc() {
        let l = lalie_inf();
        let xi = canonical_xi(&l, 5);
        assert!(mc_residual(&l, &l.d, &xi, true, 5).unwrap().is_zero());
        let g = ger_inf();
        let xi = canonical_xi(&g, 4);
        assert!(mc_residual(&g, &g.d, &xi, true, 4).unwrap().is_zero());
    }

    #[test]
    fn u_lalie_is_mc_and_zero_is_mc() {
        let l = lalie_inf();
        let x: Conv<LaLie, _> = from_generators(&l, 4, |w| if *w == 2 { LaLie.phi(2) } else { Elem::zero() });
        assert!(mc_residual(&LaLie, &l.d, &x, true, 4).unwrap().is_zero());
        let z: Conv<LaLie, _> = Conv::zero();
        assert!(mc_residual(&LaLie, &l.d, &z, true, 4).unwrap().is_zero());
        let f = morphism_from_mc(&LaLie, &l.d, &x, 4).unwrap();
        assert!(chain_map_defects(&l, &LaLie, &f).is_empty());
        assert_eq!(f.to_conv(&l), x);
    }

    #[test]
    fn pre_lie_right_symmetry() {
        // (f•g)•h − f•(g•h) is graded symmetric in g, h
        let l = lalie_inf();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let basis2 = Ger.basis(2).unwrap();
        let basis3 = Ger.basis(3).unwrap();
        let mut rand_el = |n: usize| -> Conv<Ger, _> {
            let b = if n == 2 { &basis2 } else { &basis3 };
            // keep invariance by symmetrizing a random vector
            let v = b[rng.gen_range(0..b.len())].clone();
            let e = crate::operad::symmetrize(&Ger, &Elem::basis(v), n);
            from_generators(&l, n, |w| if *w == n { e.clone() } else { Elem::zero() })
        };
        let f = rand_el(2);
        let g = rand_el(2);
        let h = rand_el(3);
        let assoc = |a: &Conv<Ger, _>, b: &Conv<Ger, _>, c: &Conv<Ger, _>| {
            prelie(&Ger, &l.d, &prelie(&Ger, &l.d, a, b, 5), c, 5)
                .plus(&prelie(&Ger, &l.d, a, &prelie(&Ger, &l.d, b, c, 5), 5).scale(&q(-1)))
        };
        let dg = conv_degree(&Ger, &l.d, &g).unwrap();
        let dh = conv_degree(&Ger, &l.d, &h).unwrap();
        let lhs = assoc(&f, &g, &h);
        let rhs = assoc(&f, &h, &g).scale(&sign((dg * dh).rem_euclid(2) == 1));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn u_ger_sign_pinning() {
        // all four sign choices are MC: negating the product or the bracket is an
        // automorphism of Ger, so the oracle pins nothing
        let g = ger_inf();
        for e1 in [1i64, -1] {
            for e2 in [1i64, -1] {
                let x = u_ger_candidate(&g, e1, e2);
                assert!(mc_residual(&Ger, &g.d, &x, true, 4).unwrap().is_zero());
            }
        }
        // compatibility with the ΛLie∞ structure maps forces e1 = +1
        let x = u_ger_candidate(&g, 1, 1);
        let f = morphism_from_mc(&Ger, &g.d, &x, 4).unwrap();
        for n in 2..=4 {
            let lhs = f.eval_elem(&Ger, &g.phi(n));
            assert_eq!(lhs, Ger.phi(n));
        }
    }

    fn u_ger_candidate(g: &crate::cobar::GerInf, e1: i64, e2: i64) -> Conv<Ger, crate::operad::Suspend<Ger>> {
        from_generators(g, 4, |w| {
            if *w == GerMono::product(2) {
                Elem::term(GerMono(vec![vec![1, 2]]), q(e1))
            } else if *w == GerMono(vec![vec![1, 2]]) {
                Elem::term(GerMono::product(2), q(e2))
            } else {
                Elem::zero()
            }
        })
    }
}
