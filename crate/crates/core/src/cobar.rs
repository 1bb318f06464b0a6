//! The cobar construction on the dual of a finite operad D, and morphisms out of it.
//!
//! Generators are s w*, w a basis element of D(n), n ≥ 2, of degree 1 − |w|.
//! A basis element is a tree whose children are sorted by their smallest leaf
//! label; its value is the composite of the generators in pre-order, then
//! relabeled. ∂ on generators comes from ∂Ξ + Ξ•Ξ = 0 for Ξ = Σ s w_i* ⊗ w_i.

use crate::exactalg::{all_perms, koszul_odd_order, multi_shuffles, sign, Perm, Q};
use crate::operad::{Elem, Operad};
use num::One;
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CNode<G> {
    Leaf(u8),
    Vert(G, Vec<CNode<G>>),
}

impl<G: fmt::Debug> fmt::Debug for CNode<G> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CNode::Leaf(l) => write!(f, "{}", l),
            CNode::Vert(g, cs) => {
                write!(f, "s{:?}*(", g)?;
                for (k, c) in cs.iter().enumerate() {
                    if k > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{:?}", c)?;
                }
                write!(f, ")")
            }
        }
    }
}

impl<G: Clone> CNode<G> {
    pub fn min_label(&self) -> u8 {
        match self {
            CNode::Leaf(l) => *l,
            CNode::Vert(_, cs) => cs.iter().map(|c| c.min_label()).min().unwrap(),
        }
    }

    pub fn arity(&self) -> usize {
        match self {
            CNode::Leaf(_) => 1,
            CNode::Vert(_, cs) => cs.iter().map(|c| c.arity()).sum(),
        }
    }

    /// The generator with leaves 1..n in order.
    pub fn corolla(g: G, n: usize) -> CNode<G> {
        CNode::Vert(g, (1..=n as u8).map(CNode::Leaf).collect())
    }

    pub fn gens_preorder(&self) -> Vec<&G> {
        let mut out = Vec::new();
        fn go<'a, G>(t: &'a CNode<G>, out: &mut Vec<&'a G>) {
            if let CNode::Vert(g, cs) = t {
                out.push(g);
                for c in cs {
                    go(c, out);
                }
            }
        }
        go(self, &mut out);
        out
    }

    pub fn leaves_planar(&self) -> Vec<u8> {
        let mut out = Vec::new();
        fn go<G>(t: &CNode<G>, out: &mut Vec<u8>) {
            match t {
                CNode::Leaf(l) => out.push(*l),
                CNode::Vert(_, cs) => cs.iter().for_each(|c| go(c, out)),
            }
        }
        go(self, &mut out);
        out
    }

    fn relabel(&self, f: &dyn Fn(u8) -> u8) -> CNode<G> {
        match self {
            CNode::Leaf(l) => CNode::Leaf(f(*l)),
            CNode::Vert(g, cs) => CNode::Vert(g.clone(), cs.iter().map(|c| c.relabel(f)).collect()),
        }
    }

    pub fn num_vertices(&self) -> usize {
        self.gens_preorder().len()
    }
}

type DualCache<B> = HashMap<(Perm, B), Elem<B>>;
type DiffCache<B> = HashMap<usize, Arc<HashMap<B, Elem<CNode<B>>>>>;

/// Cobar(D*) with structure map ΛLie∞ → Cobar(D*) given by `phi_gen`.
pub struct Cobar<D: Operad> {
    pub d: D,
    label: String,
    phi_gen: fn(&D, usize) -> Elem<D::B>,
    dual: Mutex<DualCache<D::B>>,
    diffs: Mutex<DiffCache<D::B>>,
    bases: Mutex<HashMap<usize, Arc<Vec<D::B>>>>,
}

impl<D: Operad> Cobar<D> {
    pub fn new(d: D, label: &str, phi_gen: fn(&D, usize) -> Elem<D::B>) -> Self {
        Cobar {
            d,
            label: label.to_string(),
            phi_gen,
            dual: Mutex::new(HashMap::new()),
            diffs: Mutex::new(HashMap::new()),
            bases: Mutex::new(HashMap::new()),
        }
    }

    pub fn d_basis(&self, n: usize) -> Arc<Vec<D::B>> {
        if let Some(b) = self.bases.lock().unwrap().get(&n) {
            return b.clone();
        }
        let b = Arc::new(self.d.basis(n).expect("cobar needs an enumerable basis"));
        self.bases.lock().unwrap().insert(n, b.clone());
        b
    }

    pub fn gen_degree(&self, w: &D::B) -> i64 {
        1 - self.d.degree(w)
    }

    /// σ·w_i* = Σ_j ⟨w_i*, σ⁻¹w_j⟩ w_j*.
    pub fn dual_act(&self, s: &Perm, w: &D::B) -> Elem<D::B> {
        if s.is_identity() {
            return Elem::basis(w.clone());
        }
        let key = (s.clone(), w.clone());
        if let Some(e) = self.dual.lock().unwrap().get(&key) {
            return e.clone();
        }
        let inv = s.inverse();
        let basis = self.d_basis(s.len());
        let mut fresh: HashMap<D::B, Elem<D::B>> = basis.iter().map(|b| (b.clone(), Elem::zero())).collect();
        for wj in basis.iter() {
            for (wi, c) in self.d.act(&inv, wj).iter() {
                fresh.get_mut(wi).unwrap().add_term(wj.clone(), c.clone());
            }
        }
        let mut cache = self.dual.lock().unwrap();
        for (b, e) in fresh {
            cache.insert((s.clone(), b), e);
        }
        cache[&key].clone()
    }

    pub fn tree_degree(&self, t: &CNode<D::B>) -> i64 {
        t.gens_preorder().iter().map(|g| self.gen_degree(g)).sum()
    }

    /// Sort children by minimal label at every vertex.
    pub fn canonicalize(&self, t: &CNode<D::B>) -> Elem<CNode<D::B>> {
        match t {
            CNode::Leaf(_) => Elem::basis(t.clone()),
            CNode::Vert(g, cs) => {
                let kids: Vec<Elem<CNode<D::B>>> = cs.iter().map(|c| self.canonicalize(c)).collect();
                let mins: Vec<u8> = cs.iter().map(|c| c.min_label()).collect();
                let degs: Vec<i64> = cs.iter().map(|c| self.tree_degree(c)).collect();
                let mut order: Vec<usize> = (0..cs.len()).collect();
                order.sort_by_key(|&k| mins[k]);
                let pi = Perm::from_zero_based(order.clone());
                let eps = sign(koszul_odd_order(&degs, &order));
                let gens = self.dual_act(&pi.inverse(), g);
                let mut combos: Elem<Vec<CNode<D::B>>> = Elem::basis(vec![]);
                for &k in &order {
                    combos = combos.bilinear(&kids[k], |v, c| {
                        let mut v2 = v.clone();
                        v2.push(c.clone());
                        Elem::basis(v2)
                    });
                }
                let mut out = Elem::zero();
                for (g2, cg) in gens.iter() {
                    for (v, cv) in combos.iter() {
                        out.add_term(CNode::Vert(g2.clone(), v.clone()), &eps * cg * cv);
                    }
                }
                out
            }
        }
    }

    /// ∂ on the generators of arity n, keyed by w.
    pub fn gen_diffs(&self, n: usize) -> Arc<HashMap<D::B, Elem<CNode<D::B>>>> {
        if let Some(m) = self.diffs.lock().unwrap().get(&n) {
            return m.clone();
        }
        let mut out: HashMap<D::B, Elem<CNode<D::B>>> = HashMap::new();
        for a in 2..n {
            let m = n + 1 - a;
            let sh = multi_shuffles(&[m, a - 1]);
            for wi in self.d_basis(a).iter() {
                for wj in self.d_basis(m).iter() {
                    let s0 = sign(((self.gen_degree(wj)) * self.d.degree(wi)).rem_euclid(2) == 1);
                    let tree = CNode::Vert(
                        wi.clone(),
                        std::iter::once(CNode::corolla(wj.clone(), m))
                            .chain((m + 1..=n).map(|l| CNode::Leaf(l as u8)))
                            .collect(),
                    );
                    let dcomp = self.d.compose(wi, 1, wj);
                    for s in &sh {
                        let lhs = self.canonicalize(&tree.relabel(&|l| s.apply(l as usize) as u8));
                        let rhs = self.d.act_elem(s, &dcomp);
                        for (wk, c) in rhs.iter() {
                            out.entry(wk.clone()).or_default().add_scaled(&lhs, &(-(&s0 * c)));
                        }
                    }
                }
            }
        }
        let arc = Arc::new(out);
        self.diffs.lock().unwrap().insert(n, arc.clone());
        arc
    }

    fn diff_tree(&self, t: &CNode<D::B>) -> Elem<CNode<D::B>> {
        let mut out = Elem::zero();
        let mut before = 0i64;
        self.diff_rec(t, &mut before, &mut out, &mut Vec::new());
        out
    }

    /// Derivation step at every vertex in pre-order; `before` is the degree of
    /// the generators already passed, `path` records how to rebuild the tree.
    fn diff_rec(
        &self,
        t: &CNode<D::B>,
        before: &mut i64,
        out: &mut Elem<CNode<D::B>>,
        path: &mut Vec<(CNode<D::B>, usize)>,
    ) {
        if let CNode::Vert(g, cs) = t {
            let s_before = sign(before.rem_euclid(2) == 1);
            let local = self.replace_vertex(g, cs);
            for (nt, c) in local.iter() {
                let full = rebuild(path, nt.clone());
                out.add_term(full, &s_before * c);
            }
            *before += self.gen_degree(g);
            for (k, c) in cs.iter().enumerate() {
                path.push((t.clone(), k));
                self.diff_rec(c, before, out, path);
                path.pop();
            }
        }
    }

    /// Replace the generator g over children cs by ∂g, with the Koszul sign
    /// of moving the child blocks into the new pre-order.
    fn replace_vertex(&self, g: &D::B, cs: &[CNode<D::B>]) -> Elem<CNode<D::B>> {
        let k = cs.len();
        let dg = self.gen_diffs(k);
        let Some(dgt) = dg.get(g) else {
            return Elem::zero();
        };
        let cdeg: Vec<i64> = cs.iter().map(|c| self.tree_degree(c)).collect();
        let mut out = Elem::zero();
        for (tt, c) in dgt.iter() {
            // items: generators of tt (pre-order) then child blocks 1..k
            let tg: Vec<i64> = tt.gens_preorder().iter().map(|x| self.gen_degree(x)).collect();
            let ng = tg.len();
            let mut degs = tg.clone();
            degs.extend_from_slice(&cdeg);
            let mut order = Vec::new();
            let mut gi = 0;
            let built = substitute(tt, cs, &mut gi, &mut order, ng);
            let s = sign(koszul_odd_order(&degs, &order));
            out.add_term(built, s * c);
        }
        out
    }

    pub fn enumerate(&self, labels: &[u8]) -> Vec<CNode<D::B>> {
        if labels.len() == 1 {
            return vec![CNode::Leaf(labels[0])];
        }
        let mut out = Vec::new();
        // partitions of labels into ≥ 2 blocks, blocks ordered by minimum
        for part in set_partitions(labels) {
            if part.len() < 2 {
                continue;
            }
            let subs: Vec<Vec<CNode<D::B>>> = part.iter().map(|b| self.enumerate(b)).collect();
            let mut acc: Vec<Vec<CNode<D::B>>> = vec![vec![]];
            for s in &subs {
                let mut next = Vec::new();
                for a in &acc {
                    for t in s {
                        let mut a2 = a.clone();
                        a2.push(t.clone());
                        next.push(a2);
                    }
                }
                acc = next;
            }
            for g in self.d_basis(part.len()).iter() {
                for cs in &acc {
                    out.push(CNode::Vert(g.clone(), cs.clone()));
                }
            }
        }
        out
    }
}

fn rebuild<G: Clone>(path: &[(CNode<G>, usize)], inner: CNode<G>) -> CNode<G> {
    let mut cur = inner;
    for (node, k) in path.iter().rev() {
        if let CNode::Vert(g, cs) = node {
            let mut cs2 = cs.clone();
            cs2[*k] = cur;
            cur = CNode::Vert(g.clone(), cs2);
        }
    }
    cur
}

/// Plug children blocks into the leaves of `tt` (leaf j ↦ cs[j−1]) and record
/// the resulting pre-order of items: generators of tt are 0..ng, block j is ng+j−1.
fn substitute<G: Clone>(tt: &CNode<G>, cs: &[CNode<G>], gi: &mut usize, order: &mut Vec<usize>, ng: usize) -> CNode<G> {
    match tt {
        CNode::Leaf(l) => {
            order.push(ng + *l as usize - 1);
            cs[*l as usize - 1].clone()
        }
        CNode::Vert(g, kids) => {
            order.push(*gi);
            *gi += 1;
            let nk = kids.iter().map(|k| substitute(k, cs, gi, order, ng)).collect();
            CNode::Vert(g.clone(), nk)
        }
    }
}

pub fn set_partitions(labels: &[u8]) -> Vec<Vec<Vec<u8>>> {
    let mut res: Vec<Vec<Vec<u8>>> = vec![vec![]];
    for &x in labels {
        let mut next = Vec::new();
        for p in &res {
            for k in 0..p.len() {
                let mut p2 = p.clone();
                p2[k].push(x);
                next.push(p2);
            }
            let mut p2 = p.clone();
            p2.push(vec![x]);
            next.push(p2);
        }
        res = next;
    }
    res
}

impl<D: Operad> Operad for Cobar<D> {
    type B = CNode<D::B>;

    fn name(&self) -> String {
        self.label.clone()
    }
    fn arity(&self, b: &Self::B) -> usize {
        b.arity()
    }
    fn degree(&self, b: &Self::B) -> i64 {
        self.tree_degree(b)
    }
    fn compose(&self, f: &Self::B, i: usize, g: &Self::B) -> Elem<Self::B> {
        let m = g.arity() as u8;
        let i8 = i as u8;
        let gdeg = self.tree_degree(g);
        // degree of f-vertices met after leaf i in pre-order
        let mut after = 0i64;
        let mut seen = false;
        fn walk<D: Operad>(cb: &Cobar<D>, t: &CNode<D::B>, i8: u8, seen: &mut bool, after: &mut i64) {
            match t {
                CNode::Leaf(l) => {
                    if *l == i8 {
                        *seen = true;
                    }
                }
                CNode::Vert(w, cs) => {
                    if *seen {
                        *after += cb.gen_degree(w);
                    }
                    for c in cs {
                        walk(cb, c, i8, seen, after);
                    }
                }
            }
        }
        walk(self, f, i8, &mut seen, &mut after);
        let gsh = g.relabel(&|l| l + i8 - 1);
        fn plug<G: Clone>(t: &CNode<G>, i8: u8, m: u8, g: &CNode<G>) -> CNode<G> {
            match t {
                CNode::Leaf(l) if *l == i8 => g.clone(),
                CNode::Leaf(l) if *l > i8 => CNode::Leaf(l + m - 1),
                CNode::Leaf(l) => CNode::Leaf(*l),
                CNode::Vert(w, cs) => CNode::Vert(w.clone(), cs.iter().map(|c| plug(c, i8, m, g)).collect()),
            }
        }
        let res = plug(f, i8, m, &gsh);
        Elem::term(res, sign((gdeg * after).rem_euclid(2) == 1))
    }
    fn act(&self, s: &Perm, f: &Self::B) -> Elem<Self::B> {
        self.canonicalize(&f.relabel(&|l| s.apply(l as usize) as u8))
    }
    fn unit(&self) -> Self::B {
        CNode::Leaf(1)
    }
    fn diff(&self, f: &Self::B) -> Elem<Self::B> {
        self.diff_tree(f)
    }
    fn has_diff(&self) -> bool {
        true
    }
    fn basis(&self, n: usize) -> Option<Vec<Self::B>> {
        if n == 0 {
            return Some(vec![]);
        }
        let labels: Vec<u8> = (1..=n as u8).collect();
        let mut v = self.enumerate(&labels);
        v.sort();
        Some(v)
    }
    fn phi(&self, n: usize) -> Elem<Self::B> {
        if n < 2 {
            return Elem::zero();
        }
        (self.phi_gen)(&self.d, n).map_basis(|w| (CNode::corolla(w.clone(), n), Q::one()))
    }
}

/// Evaluate a morphism Cobar(D*) → P given on generators (corollas with leaves in order).
pub fn eval_morphism<D: Operad, P: Operad>(
    t: &CNode<D::B>,
    gen_image: &mut dyn FnMut(&D::B) -> Elem<P::B>,
    target: &P,
) -> Elem<P::B> {
    fn planar<D: Operad, P: Operad>(
        t: &CNode<D::B>,
        gen_image: &mut dyn FnMut(&D::B) -> Elem<P::B>,
        target: &P,
    ) -> Elem<P::B> {
        match t {
            CNode::Leaf(_) => Elem::basis(target.unit()),
            CNode::Vert(g, cs) => {
                let mut acc = gen_image(g);
                let mut pos = 1;
                for c in cs {
                    let m = c.arity();
                    if let CNode::Vert(..) = c {
                        let cv = planar::<D, P>(c, gen_image, target);
                        acc = target.compose_elem(&acc, pos, &cv);
                    }
                    pos += m;
                }
                acc
            }
        }
    }
    let v = planar::<D, P>(t, gen_image, target);
    let labels: Vec<usize> = t.leaves_planar().iter().map(|&l| l as usize).collect();
    target.act_elem(&Perm::from_images(&labels), &v)
}

/// ΛLie∞ = Cobar(Λ²coCom): generators s1^c_n, degree 3 − 2n.
pub type LaLieInf = Cobar<crate::operad::Suspend<crate::classical::Com>>;
/// Ger∞ = Cobar(Ger^∨).
pub type GerInf = Cobar<crate::operad::Suspend<crate::classical::Ger>>;
/// Cobar of the dual of As: all generators of degree 1.
pub type AsInf = Cobar<crate::classical::As>;

pub fn lalie_inf() -> LaLieInf {
    Cobar::new(crate::classical::com_desusp2(), "ΛLie∞", |_, n| Elem::basis(n))
}

pub fn ger_inf() -> GerInf {
    Cobar::new(crate::classical::ger_desusp2(), "Ger∞", |_, n| {
        Elem::basis(crate::classical::GerMono::product(n))
    })
}

pub fn as_inf() -> AsInf {
    Cobar::new(crate::classical::As, "As∞", |d, n| {
        Elem::from_terms(d.basis(n).unwrap().into_iter().map(|w| (w, Q::one())))
    })
}

/// All permutations of the generator's slots, a convenience for tests.
pub fn orbit_sum<D: Operad>(cb: &Cobar<D>, t: &CNode<D::B>) -> Elem<CNode<D::B>> {
    let mut out = Elem::zero();
    for s in all_perms(t.arity()) {
        out.add_assign(&cb.act(&s, t));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::q;
    use crate::operad::check_operad_axioms;

    #[test]
    fn lalie_inf_low_differentials() {
        let l = lalie_inf();
        assert!(l.diff(&CNode::corolla(2, 2)).is_zero());
        let d3 = l.diff(&CNode::corolla(3, 3));
        assert_eq!(d3.len(), 3);
        // −Σ_{Sh(2,1)} σ(s1^c_2 ∘₁ s1^c_2)
        let g2 = CNode::corolla(2usize, 2);
        let comp = l.compose(&g2, 1, &g2);
        let mut expect = Elem::zero();
        for s in multi_shuffles(&[2, 1]) {
            expect.add_scaled(&l.act_elem(&s, &comp), &q(-1));
        }
        assert_eq!(d3, expect);
    }

    #[test]
    fn lalie_inf_is_a_dg_operad() {
        let l = lalie_inf();
        let r = check_operad_axioms(&l, 4, 10, 3);
        assert!(r.passed(), "{:?}", r.failures);
        for n in 2..=5 {
            for t in l.basis(n).unwrap() {
                assert!(l.diff_elem(&l.diff(&t)).is_zero(), "{:?}", t);
            }
        }
    }

    #[test]
    fn lalie_inf_dimensions_match_tree_count() {
        // rooted trees with labeled leaves and ≥2-ary vertices: 1, 1, 4, 26, 236
        let l = lalie_inf();
        let want = [0usize, 1, 1, 4, 26, 236];
        for n in 1..=5 {
            assert_eq!(l.basis(n).unwrap().len(), want[n]);
        }
    }

    #[test]
    fn ger_inf_is_a_dg_operad() {
        let g = ger_inf();
        let r = check_operad_axioms(&g, 3, 8, 5);
        assert!(r.passed(), "{:?}", r.failures);
        for t in g.basis(3).unwrap() {
            assert!(g.diff_elem(&g.diff(&t)).is_zero(), "{:?}", t);
        }
    }

    #[test]
    fn as_inf_is_a_dg_operad() {
        let a = as_inf();
        let r = check_operad_axioms(&a, 3, 8, 6);
        assert!(r.passed(), "{:?}", r.failures);
        for t in a.basis(4).unwrap() {
            assert!(a.diff_elem(&a.diff(&t)).is_zero(), "{:?}", t);
        }
    }
}
