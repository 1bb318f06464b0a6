//! Finite-dimensional algebras over operads, twisting by Maurer-Cartan
//! elements and the inverse construction.
//!
//! Vectors are `Elem<usize>` over a graded basis. An operation μ ∈ O(n)
//! acts by μ(v₁,…,v_n); the operad conventions are
//! (f∘ᵢg)(v) = (−1)^{|g|(|v₁|+…+|v_{i−1}|)} f(v₁,…,g(vᵢ,…),…) and
//! (σ·f)(v₁,…,v_n) = ε f(v_{σ(1)},…,v_{σ(n)}) with the Koszul sign ε.

use crate::classical::{Ger, GerMono};
use crate::cobar::Cobar;
use crate::conv::CobarMorphism;
use crate::exactalg::{factorial, koszul_odd_order, q, sign, Q};
use crate::operad::{elem_degree, Elem, Operad};
use crate::twisting::{Tw, TB};
use num::{One, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

pub type Vector = Elem<usize>;

pub trait OAlgebra {
    type O: Operad;
    fn operad(&self) -> &Self::O;
    fn dim(&self) -> usize;
    fn degree(&self, i: usize) -> i64;
    fn diff(&self, i: usize) -> Vector;
    /// μ(e_{i₁},…,e_{i_n}) on basis vectors.
    fn eval(&self, op: &<Self::O as Operad>::B, args: &[usize]) -> Vector;
}

/// Multilinear extension of `eval`.
pub fn eval_elem<A: OAlgebra>(alg: &A, op: &Elem<<A::O as Operad>::B>, args: &[Vector]) -> Vector {
    let mut out = Vector::zero();
    if args.iter().any(|a| a.is_zero()) {
        return out;
    }
    let mut idx = vec![0usize; args.len()];
    let terms: Vec<Vec<(usize, Q)>> =
        args.iter().map(|a| a.iter().map(|(i, c)| (*i, c.clone())).collect()).collect();
    loop {
        let mut c = Q::one();
        let mut basis = Vec::with_capacity(args.len());
        for (k, t) in terms.iter().enumerate() {
            c *= &t[idx[k]].1;
            basis.push(t[idx[k]].0);
        }
        for (b, x) in op.iter() {
            out.add_scaled(&alg.eval(b, &basis), &(&c * x));
        }
        let mut k = 0;
        loop {
            if k == args.len() {
                return out;
            }
            idx[k] += 1;
            if idx[k] < terms[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

pub fn vec_degree<A: OAlgebra>(alg: &A, v: &Vector) -> Option<i64> {
    let mut d = None;
    for (i, _) in v.iter() {
        let e = alg.degree(*i);
        if d.is_some_and(|x| x != e) {
            return None;
        }
        d = Some(e);
    }
    d
}

pub fn diff_vec<A: OAlgebra>(alg: &A, v: &Vector) -> Vector {
    v.map_linear(|&i| alg.diff(i))
}

/// ∂α + Σ_{n≥2} 1/n! φ_n(α,…,α) with the sum cut at `max`.
pub fn mc_defect<A: OAlgebra>(alg: &A, alpha: &Vector, max: usize) -> Vector {
    let mut out = diff_vec(alg, alpha);
    for n in 2..=max {
        let phi = alg.operad().phi(n);
        if phi.is_zero() {
            continue;
        }
        let x = eval_elem(alg, &phi, &vec![alpha.clone(); n]);
        out.add_scaled(&x, &(Q::one() / q(factorial(n) as i64)));
    }
    out
}

/// Largest k ≤ `max` such that some arity-k basis operation is nonzero on
/// elements of filtration ≥ 1 (here: all basis vectors of positive filtration
/// weight `weights[i] ≥ 1`). Twisting sums are exact once r exceeds it.
pub fn nilpotency_bound<A: OAlgebra>(alg: &A, weights: &[usize], max: usize) -> Option<usize> {
    let pos: Vec<usize> = (0..alg.dim()).filter(|&i| weights[i] >= 1).collect();
    let mut last = 0;
    for k in 1..=max {
        let ops = alg.operad().basis_elems(k)?;
        let mut any = false;
        for tuple in tuples(&pos, k) {
            if ops.iter().any(|op| !eval_elem(alg, op, &tuple.iter().map(|&i| Vector::basis(i)).collect::<Vec<_>>()).is_zero()) {
                any = true;
                break;
            }
        }
        if any {
            last = k;
        } else {
            return Some(last);
        }
    }
    None
}

fn tuples(pool: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|t| {
                pool.iter().map(move |&i| {
                    let mut t = t.clone();
                    t.push(i);
                    t
                })
            })
            .collect();
    }
    out
}

/// A dg Gerstenhaber algebra given by structure constants. The product is
/// assumed graded commutative and the bracket of degree −1.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GerAlgebra {
    pub degrees: Vec<i64>,
    #[serde(default)]
    pub diff: BTreeMap<usize, Vec<(usize, String)>>,
    #[serde(default)]
    pub product: BTreeMap<String, Vec<(usize, String)>>,
    #[serde(default)]
    pub bracket: BTreeMap<String, Vec<(usize, String)>>,
    #[serde(skip)]
    ger: Ger,
}

fn parse_vec(v: &[(usize, String)]) -> Vector {
    Vector::from_terms(v.iter().map(|(i, c)| (*i, crate::exactalg::parse_q(c).unwrap_or_else(Q::zero))))
}

fn key(i: usize, j: usize) -> String {
    format!("{},{}", i, j)
}

impl GerAlgebra {
    pub fn new(degrees: Vec<i64>) -> Self {
        GerAlgebra { degrees, diff: BTreeMap::new(), product: BTreeMap::new(), bracket: BTreeMap::new(), ger: Ger }
    }

    fn store(v: &Vector) -> Vec<(usize, String)> {
        v.iter().map(|(i, c)| (*i, crate::exactalg::fmt_q(c))).collect()
    }

    pub fn set_diff(&mut self, i: usize, v: Vector) {
        self.diff.insert(i, Self::store(&v));
    }

    /// Sets x·y and the symmetric value y·x = (−1)^{|x||y|} x·y.
    pub fn set_product(&mut self, i: usize, j: usize, v: Vector) {
        let s = sign(self.degrees[i] * self.degrees[j] % 2 != 0);
        self.product.insert(key(j, i), Self::store(&v.scale(&s)));
        self.product.insert(key(i, j), Self::store(&v));
    }

    /// Sets {x,y} and {y,x} = −(−1)^{(|x|−1)(|y|−1)}{x,y}.
    pub fn set_bracket(&mut self, i: usize, j: usize, v: Vector) {
        let s = -sign((self.degrees[i] - 1) * (self.degrees[j] - 1) % 2 != 0);
        self.bracket.insert(key(j, i), Self::store(&v.scale(&s)));
        self.bracket.insert(key(i, j), Self::store(&v));
    }

    fn mul(&self, a: &Vector, b: &Vector) -> Vector {
        a.bilinear(b, |&i, &j| self.product.get(&key(i, j)).map(|v| parse_vec(v)).unwrap_or_default())
    }

    fn br(&self, a: &Vector, b: &Vector) -> Vector {
        a.bilinear(b, |&i, &j| self.bracket.get(&key(i, j)).map(|v| parse_vec(v)).unwrap_or_default())
    }
}

impl OAlgebra for GerAlgebra {
    type O = Ger;
    fn operad(&self) -> &Ger {
        &self.ger
    }
    fn dim(&self) -> usize {
        self.degrees.len()
    }
    fn degree(&self, i: usize) -> i64 {
        self.degrees[i]
    }
    fn diff(&self, i: usize) -> Vector {
        self.diff.get(&i).map(|v| parse_vec(v)).unwrap_or_default()
    }
    /// Arguments are moved into the written form of the monomial, passing the
    /// odd opening braces to their left, then the expression is evaluated.
    fn eval(&self, op: &GerMono, args: &[usize]) -> Vector {
        let mut order = Vec::new();
        let mut braces_before = vec![0usize; args.len()];
        let mut braces = 0;
        for b in &op.0 {
            for (k, &x) in b.iter().enumerate() {
                if k + 1 < b.len() {
                    braces += 1;
                }
                braces_before[x as usize - 1] = braces;
                order.push(x as usize - 1);
            }
        }
        let degs: Vec<i64> = args.iter().map(|&i| self.degrees[i]).collect();
        let mut odd = koszul_odd_order(&degs, &order);
        for (k, &i) in args.iter().enumerate() {
            if self.degrees[i] % 2 != 0 && braces_before[k] % 2 == 1 {
                odd = !odd;
            }
        }
        let mut acc: Option<Vector> = None;
        for b in &op.0 {
            let mut val = Vector::basis(args[*b.last().unwrap() as usize - 1]);
            for &x in b.iter().rev().skip(1) {
                val = self.br(&Vector::basis(args[x as usize - 1]), &val);
            }
            acc = Some(match acc {
                None => val,
                Some(a) => self.mul(&a, &val),
            });
        }
        acc.unwrap_or_default().scale(&sign(odd))
    }
}

/// An O-algebra pulled back along a map O′ → O given on basis symbols.
pub struct PullBack<'a, A: OAlgebra, P: Operad> {
    pub inner: &'a A,
    pub source: &'a P,
    pub map: Box<dyn Fn(&P::B) -> Elem<<A::O as Operad>::B> + 'a>,
}

impl<A: OAlgebra, P: Operad> OAlgebra for PullBack<'_, A, P> {
    type O = P;
    fn operad(&self) -> &P {
        self.source
    }
    fn dim(&self) -> usize {
        self.inner.dim()
    }
    fn degree(&self, i: usize) -> i64 {
        self.inner.degree(i)
    }
    fn diff(&self, i: usize) -> Vector {
        self.inner.diff(i)
    }
    fn eval(&self, op: &P::B, args: &[usize]) -> Vector {
        let img = (self.map)(op);
        eval_elem(self.inner, &img, &args.iter().map(|&i| Vector::basis(i)).collect::<Vec<_>>())
    }
}

/// Pull back along a morphism out of a cobar construction.
pub fn pull_back_cobar<'a, A: OAlgebra, D: Operad>(
    inner: &'a A,
    source: &'a Cobar<D>,
    f: &'a CobarMorphism<A::O, D>,
) -> PullBack<'a, A, Cobar<D>> {
    PullBack { inner, source, map: Box::new(move |t| f.eval(inner.operad(), t)) }
}

/// V^α as a TwO-algebra: f(v₁,…,v_n) = Σ_r 1/r! f(1_r)(α,…,α,v₁,…,v_n).
pub struct Twisted<'a, A: OAlgebra> {
    pub inner: &'a A,
    pub tw: &'a Tw<A::O>,
    pub alpha: Vector,
}

impl<'a, A: OAlgebra> Twisted<'a, A> {
    /// Refuses α that does not solve the MC equation (sums cut at R + 1).
    pub fn new(inner: &'a A, tw: &'a Tw<A::O>, alpha: Vector) -> Result<Self, crate::Error> {
        let d = mc_defect(inner, &alpha, tw.cap + 1);
        if !d.is_zero() {
            return Err(crate::Error::Precondition(format!("α is not Maurer-Cartan: defect {:?}", d)));
        }
        Ok(Twisted { inner, tw, alpha })
    }
}

impl<A: OAlgebra> OAlgebra for Twisted<'_, A> {
    type O = Tw<A::O>;
    fn operad(&self) -> &Tw<A::O> {
        self.tw
    }
    fn dim(&self) -> usize {
        self.inner.dim()
    }
    fn degree(&self, i: usize) -> i64 {
        self.inner.degree(i)
    }
    /// ∂^α = ∂ + Σ_{r≥1} 1/r! φ_{r+1}(α,…,α,·).
    fn diff(&self, i: usize) -> Vector {
        let mut out = self.inner.diff(i);
        for r in 1..=self.tw.cap {
            let phi = self.inner.operad().phi(r + 1);
            if phi.is_zero() {
                continue;
            }
            let mut args = vec![self.alpha.clone(); r];
            args.push(Vector::basis(i));
            out.add_scaled(&eval_elem(self.inner, &phi, &args), &(Q::one() / q(factorial(r) as i64)));
        }
        out
    }
    fn eval(&self, (r, b): &TB<A::O>, args: &[usize]) -> Vector {
        let mut full = vec![self.alpha.clone(); *r];
        full.extend(args.iter().map(|&i| Vector::basis(i)));
        eval_elem(self.inner, &Elem::basis(b.clone()), &full).scale(&(Q::one() / q(factorial(*r) as i64)))
    }
}

/// The data recovered from a TwO-algebra W: α = u^∘ evaluated, the O-action
/// through ι, and ∂ = ∂_W − κ(φ)(·).
pub struct Untwisted<'a, W: OAlgebra<O = Tw<O>>, O: Operad> {
    pub w: &'a W,
    pub alpha: Vector,
}

pub fn untwist<W: OAlgebra<O = Tw<O>>, O: Operad>(w: &W) -> Untwisted<'_, W, O> {
    let alpha = eval_elem(w, &w.operad().u_circ(), &[]);
    Untwisted { w, alpha }
}

impl<W: OAlgebra<O = Tw<O>>, O: Operad> OAlgebra for Untwisted<'_, W, O> {
    type O = O;
    fn operad(&self) -> &O {
        &self.w.operad().base
    }
    fn dim(&self) -> usize {
        self.w.dim()
    }
    fn degree(&self, i: usize) -> i64 {
        self.w.degree(i)
    }
    fn diff(&self, i: usize) -> Vector {
        let k = self.w.operad().kappa().clone();
        self.w.diff(i).minus(&eval_elem(self.w, &k, &[Vector::basis(i)]))
    }
    fn eval(&self, op: &O::B, args: &[usize]) -> Vector {
        self.w.eval(&(0, op.clone()), args)
    }
}

/// Differences between two algebra structures over the same operad on the
/// operations of `ops` (all basis tuples) and on the differential.
pub fn structure_defects<A: OAlgebra, B: OAlgebra<O = A::O>>(
    a: &A,
    b: &B,
    ops: &[Elem<<A::O as Operad>::B>],
) -> Vec<String> {
    let mut out = Vec::new();
    let all: Vec<usize> = (0..a.dim()).collect();
    for i in 0..a.dim() {
        if a.diff(i) != b.diff(i) {
            out.push(format!("differential on e{}", i));
        }
    }
    for op in ops {
        let n = op.iter().next().map_or(0, |(x, _)| a.operad().arity(x));
        for t in tuples(&all, n) {
            let args: Vec<Vector> = t.iter().map(|&i| Vector::basis(i)).collect();
            if eval_elem(a, op, &args) != eval_elem(b, op, &args) {
                out.push(format!("{:?} on {:?}", op, t));
            }
        }
    }
    out
}

/// Check that `alg` is an algebra: compatibility with ∘ᵢ, with the symmetric
/// action and with the differentials, for operations from `ops` in arity ≤ `max`.
pub fn algebra_axiom_defects<A: OAlgebra>(alg: &A, ops: &BTreeMap<usize, Vec<Elem<<A::O as Operad>::B>>>) -> Vec<String> {
    let op = alg.operad();
    let mut out = Vec::new();
    let all: Vec<usize> = (0..alg.dim()).collect();
    let basis = |t: &[usize]| t.iter().map(|&i| Vector::basis(i)).collect::<Vec<_>>();
    for (&n, fs) in ops {
        for f in fs {
            let df = elem_degree(op, f).unwrap_or(0);
            for t in tuples(&all, n) {
                let degs: Vec<i64> = t.iter().map(|&i| alg.degree(i)).collect();
                // ∂(f(v)) = (∂f)(v) + (−1)^{|f|} Σ ± f(…,∂v_k,…)
                let lhs = diff_vec(alg, &eval_elem(alg, f, &basis(&t)));
                let mut rhs = eval_elem(alg, &op.diff_elem(f), &basis(&t));
                let mut pre = df;
                for k in 0..n {
                    let mut args = basis(&t);
                    args[k] = alg.diff(t[k]);
                    rhs.add_scaled(&eval_elem(alg, f, &args), &sign(pre % 2 != 0));
                    pre += degs[k];
                }
                if lhs != rhs {
                    out.push(format!("differential: {:?} on {:?}", f, t));
                }
                // (σ·f)(v) = ε f(v_{σ(1)},…)
                for s in crate::exactalg::all_perms(n).into_iter().take(3) {
                    let lhs = eval_elem(alg, &op.act_elem(&s, f), &basis(&t));
                    let order: Vec<usize> = (1..=n).map(|j| s.apply(j) - 1).collect();
                    let permuted: Vec<usize> = order.iter().map(|&j| t[j]).collect();
                    let eps = sign(koszul_odd_order(&degs, &order));
                    let rhs = eval_elem(alg, f, &basis(&permuted)).scale(&eps);
                    if lhs != rhs {
                        out.push(format!("equivariance: {:?} {:?} on {:?}", s, f, t));
                    }
                }
            }
            for (&m, gs) in ops {
                for g in gs {
                    let dg = elem_degree(op, g).unwrap_or(0);
                    for i in 1..=n {
                        let fg = op.compose_elem(f, i, g);
                        for t in tuples(&all, n + m - 1) {
                            let lhs = eval_elem(alg, &fg, &basis(&t));
                            let inner = eval_elem(alg, g, &basis(&t[i - 1..i - 1 + m]));
                            let mut args = basis(&t[..i - 1]);
                            args.push(inner);
                            args.extend(basis(&t[i - 1 + m..]));
                            let pre: i64 = t[..i - 1].iter().map(|&j| alg.degree(j)).sum();
                            let rhs = eval_elem(alg, f, &args).scale(&sign(dg * pre % 2 != 0));
                            if lhs != rhs {
                                out.push(format!("composition: {:?} o{} {:?} on {:?}", f, i, g, t));
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

/// The 4-dimensional test algebra: x₁, x₂ in degree 2, y in degree 3, z in
/// degree 4 with {x₁,x₂} = y and x₁x₁ = z. Filtration weights 1, 1, 2, 2.
pub fn test_ger_algebra() -> (GerAlgebra, Vec<usize>) {
    let mut a = GerAlgebra::new(vec![2, 2, 3, 4]);
    a.set_bracket(0, 1, Vector::basis(2));
    a.set_product(0, 0, Vector::basis(3));
    (a, vec![1, 1, 2, 2])
}

/// ATw(V, α) for a Tw-coalgebra structure c: O → TwO: V^α pulled back along c.
pub fn atw<'a, A: OAlgebra>(
    twisted: &'a Twisted<'a, A>,
    c: impl Fn(&<A::O as Operad>::B) -> Elem<TB<A::O>> + 'a,
) -> PullBack<'a, Twisted<'a, A>, A::O> {
    PullBack { inner: twisted, source: twisted.inner.operad(), map: Box::new(c) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::ger_basis;

    fn ger_ops(max: usize) -> BTreeMap<usize, Vec<Elem<GerMono>>> {
        (1..=max).map(|n| (n, ger_basis(n).into_iter().map(Elem::basis).collect())).collect()
    }

    #[test]
    fn test_algebra_is_a_ger_algebra() {
        let (a, _) = test_ger_algebra();
        let defects = algebra_axiom_defects(&a, &ger_ops(3));
        assert!(defects.is_empty(), "{:?}", &defects[..defects.len().min(5)]);
    }

    #[test]
    fn twisted_algebra_is_a_tw_algebra() {
        let (a, w) = test_ger_algebra();
        assert!(nilpotency_bound(&a, &w, 4).unwrap() <= 2);
        let tw = Tw::new(Ger, 3);
        let t = Twisted::new(&a, &tw, Vector::basis(0)).unwrap();
        let ops: BTreeMap<usize, Vec<Elem<TB<Ger>>>> =
            (0..=2).map(|n| (n, tw.basis_elems(n).unwrap())).collect();
        let defects = algebra_axiom_defects(&t, &ops);
        assert!(defects.is_empty(), "{:?}", &defects[..defects.len().min(5)]);
    }

    #[test]
    fn non_mc_alpha_is_refused() {
        let (a, _) = test_ger_algebra();
        let tw = Tw::new(Ger, 3);
        assert!(Twisted::new(&a, &tw, Vector::basis(0).plus(&Vector::basis(1))).is_err());
    }

    #[test]
    fn untwist_inverts_twist() {
        let (a, _) = test_ger_algebra();
        let tw = Tw::new(Ger, 3);
        let ops: Vec<Elem<GerMono>> = ger_ops(3).into_values().flatten().collect();
        for alpha in [Vector::zero(), Vector::basis(0), Vector::basis(1).scale(&q(3))] {
            let t = Twisted::new(&a, &tw, alpha.clone()).unwrap();
            let u = untwist(&t);
            assert_eq!(u.alpha, alpha);
            assert!(structure_defects(&a, &u, &ops).is_empty());
        }
    }

    #[test]
    fn zero_twist_and_additivity() {
        let (a, _) = test_ger_algebra();
        let tw = Tw::new(Ger, 3);
        let ops: Vec<Elem<GerMono>> = ger_ops(3).into_values().flatten().collect();
        let emb = |b: &GerMono| Elem::basis((0usize, b.clone()));
        // P2
        let t0 = Twisted::new(&a, &tw, Vector::zero()).unwrap();
        assert!(structure_defects(&a, &atw(&t0, emb), &ops).is_empty());
        // P3: α = x₁, then α′ = −x₁ + x₂ in V^α, against α + α′ = x₂
        let alpha = Vector::basis(0);
        let alpha2 = Vector::basis(1).minus(&Vector::basis(0));
        let t1 = Twisted::new(&a, &tw, alpha.clone()).unwrap();
        let v1 = atw(&t1, emb);
        let tw_v1 = Tw::new(Ger, 3);
        let t2 = Twisted::new(&v1, &tw_v1, alpha2.clone()).unwrap();
        let twice = atw(&t2, emb);
        let t12 = Twisted::new(&a, &tw, alpha.plus(&alpha2)).unwrap();
        let once = atw(&t12, emb);
        let d = structure_defects(&twice, &once, &ops);
        assert!(d.is_empty(), "{:?}", d);
        // and the twist actually changed the differential
        assert!(!structure_defects(&a, &once, &ops).is_empty());
    }

    #[test]
    fn atw_commutes_with_pullback() {
        let (a, _) = test_ger_algebra();
        let alpha = Vector::basis(0);
        let tw = Tw::new(Ger, 2);
        let t = Twisted::new(&a, &tw, alpha.clone()).unwrap();
        let twisted = atw(&t, |b| Elem::basis((0usize, b.clone())));
        let ops: Vec<Elem<GerMono>> = ger_ops(3).into_values().flatten().collect();

        // Ψ = id
        let id_pulled = PullBack { inner: &a, source: &Ger, map: Box::new(|b: &GerMono| Elem::basis(b.clone())) };
        let t_id = Twisted::new(&id_pulled, &tw, alpha.clone()).unwrap();
        let lhs = atw(&t_id, |b| Elem::basis((0usize, b.clone())));
        assert!(structure_defects(&lhs, &twisted, &ops).is_empty());

        // Ψ = U_Ger, Ger∞ carrying α_𝔊 and Ger carrying the embedding
        let tw_g = Tw::new(crate::cobar::ger_inf(), 2);
        let u = crate::conv::u_ger(6);
        let pulled = pull_back_cobar(&a, &tw_g.base, &u);
        let c = crate::conv::morphism_from_mc(
            &tw_g,
            &tw_g.base.d,
            &crate::twisting::alpha_ger(&tw_g, 5),
            5,
        )
        .unwrap();
        let t_g = Twisted::new(&pulled, &tw_g, alpha).unwrap();
        let lhs = atw(&t_g, |x| c.eval(&tw_g, x));
        let rhs = pull_back_cobar(&twisted, &tw_g.base, &u);
        let mut gens = Vec::new();
        for n in 1..=3 {
            gens.extend(tw_g.base.basis(n).unwrap().into_iter().map(Elem::basis));
        }
        let d = structure_defects(&lhs, &rhs, &gens);
        assert!(d.is_empty(), "{:?}", d);
    }
}
