//! Brace trees: the operads BT, TwBT (trees with neutral vertices) and Br.
//!
//! A tree hangs from a root of valency one. Every non-root vertex is labeled
//! or neutral and owns the edge towards its parent, so edges are ordered by
//! the planar preorder of their tips. Edges have degree −1, neutral vertices
//! degree 2, and |T| = 2|V_ν| − |E| + 1.

use crate::exactalg::{all_perms, factorial, q, sign, Perm, Q};
use crate::operad::{Elem, Operad};
use crate::twisting::{Tw, TB};
use crate::Error;
use num::One;
use std::fmt;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Kind {
    Lab(u8),
    Neu,
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Node {
    pub kind: Kind,
    pub ch: Vec<Node>,
}

/// The vertex above the root; the root itself is implicit.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BraceTree(pub Node);

impl Node {
    pub fn lab(k: u8, ch: Vec<Node>) -> Node {
        Node { kind: Kind::Lab(k), ch }
    }
    pub fn neu(ch: Vec<Node>) -> Node {
        Node { kind: Kind::Neu, ch }
    }
    fn preorder<'a>(&'a self, out: &mut Vec<&'a Node>) {
        out.push(self);
        for c in &self.ch {
            c.preorder(out);
        }
    }
    fn write(&self, s: &mut String) {
        match self.kind {
            Kind::Lab(k) => s.push_str(&format!("(L{}", k)),
            Kind::Neu => s.push_str("(N"),
        }
        for c in &self.ch {
            s.push(' ');
            c.write(s);
        }
        s.push(')');
    }
    fn map_labels(&self, f: &impl Fn(u8) -> Kind) -> Node {
        Node {
            kind: match self.kind {
                Kind::Lab(k) => f(k),
                Kind::Neu => Kind::Neu,
            },
            ch: self.ch.iter().map(|c| c.map_labels(f)).collect(),
        }
    }
}

impl BraceTree {
    pub fn vertices(&self) -> Vec<&Node> {
        let mut v = Vec::new();
        self.0.preorder(&mut v);
        v
    }
    pub fn arity(&self) -> usize {
        self.vertices().iter().filter(|v| matches!(v.kind, Kind::Lab(_))).count()
    }
    pub fn neutral_count(&self) -> usize {
        self.vertices().iter().filter(|v| v.kind == Kind::Neu).count()
    }
    pub fn degree(&self) -> i64 {
        let v = self.vertices();
        let r = v.iter().filter(|x| x.kind == Kind::Neu).count() as i64;
        2 * r - v.len() as i64 + 1
    }
    /// Every neutral vertex has at least two incoming edges.
    pub fn is_admissible(&self) -> bool {
        self.vertices().iter().all(|v| v.kind != Kind::Neu || v.ch.len() >= 2)
    }
    pub fn relabel(&self, f: impl Fn(u8) -> Kind) -> BraceTree {
        BraceTree(self.0.map_labels(&f))
    }
    pub fn to_sexpr(&self) -> String {
        let mut s = String::from("(root ");
        self.0.write(&mut s);
        s.push(')');
        s
    }

    pub fn parse(src: &str) -> Result<BraceTree, Error> {
        let toks: Vec<String> = src.replace('(', " ( ").replace(')', " ) ").split_whitespace().map(String::from).collect();
        let err = |m: &str| Error::Parse(format!("{}: {}", m, src));
        if toks.len() < 4 || toks[0] != "(" || toks[1] != "root" || toks.last().map(String::as_str) != Some(")") {
            return Err(err("expected (root X)"));
        }
        let mut pos = 2;
        let node = parse_node(&toks, &mut pos).ok_or_else(|| err("bad vertex"))?;
        if pos != toks.len() - 1 {
            return Err(err("trailing input"));
        }
        let t = BraceTree(node);
        let mut labels: Vec<u8> = t.vertices().iter().filter_map(|v| match v.kind {
            Kind::Lab(k) => Some(k),
            Kind::Neu => None,
        }).collect();
        labels.sort_unstable();
        if labels.iter().enumerate().any(|(j, &k)| k as usize != j + 1) {
            return Err(err("labels must be 1..n"));
        }
        Ok(t)
    }
}

fn parse_node(toks: &[String], pos: &mut usize) -> Option<Node> {
    if toks.get(*pos)? != "(" {
        return None;
    }
    let head = toks.get(*pos + 1)?;
    let kind = if head == "N" {
        Kind::Neu
    } else {
        Kind::Lab(head.strip_prefix('L')?.parse().ok().filter(|&k| k > 0)?)
    };
    *pos += 2;
    let mut ch = Vec::new();
    while toks.get(*pos)? == "(" {
        ch.push(parse_node(toks, pos)?);
    }
    *pos += 1;
    Some(Node { kind, ch })
}

impl fmt::Debug for BraceTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_sexpr())
    }
}

impl fmt::Display for BraceTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_sexpr())
    }
}

fn tree(s: &str) -> BraceTree {
    BraceTree::parse(s).expect("named tree")
}

pub fn t_id() -> BraceTree {
    tree("(root (L1))")
}
pub fn t_oo() -> BraceTree {
    tree("(root (L1 (L2)))")
}
pub fn t_cup() -> BraceTree {
    tree("(root (N (L1) (L2)))")
}
pub fn t_cup_opp() -> BraceTree {
    tree("(root (N (L2) (L1)))")
}
pub fn t_b1() -> BraceTree {
    tree("(root (N (L1)))")
}
pub fn t_1b() -> BraceTree {
    tree("(root (L1 (N)))")
}
pub fn t_bb() -> BraceTree {
    tree("(root (N (N)))")
}
pub fn t_bb1() -> BraceTree {
    tree("(root (N (N (L1))))")
}
/// The brace corolla T_k ∈ 𝒯(k+1): vertex 1 carrying 2,…,k+1.
pub fn corolla(k: usize) -> BraceTree {
    BraceTree(Node::lab(1, (2..=k as u8 + 1).map(|j| Node::lab(j, vec![])).collect()))
}

// Insertion works on trees whose vertices carry the position of their edge in
// the concatenated order E(T′) ⊔ (E(T) ∖ root edge).
#[derive(Clone)]
struct INode {
    kind: Kind,
    id: usize,
    ch: Vec<INode>,
}

fn index(n: &Node, next: &mut usize) -> INode {
    let id = *next;
    *next += 1;
    INode { kind: n.kind, id, ch: n.ch.iter().map(|c| index(c, next)).collect() }
}

fn slot_count(n: &INode) -> usize {
    1 + n.ch.iter().map(|c| 1 + slot_count(c)).sum::<usize>()
}

/// Rebuild `n` with `extra[k]` hung at the k-th slot of the clockwise walk.
fn attach(n: &INode, extra: &[Vec<INode>], slot: &mut usize) -> INode {
    let mut ch = extra[*slot].clone();
    *slot += 1;
    for c in &n.ch {
        ch.push(attach(c, extra, slot));
        ch.extend(extra[*slot].iter().cloned());
        *slot += 1;
    }
    INode { kind: n.kind, id: n.id, ch }
}

fn ids_preorder(n: &INode, out: &mut Vec<usize>) {
    out.push(n.id);
    for c in &n.ch {
        ids_preorder(c, out);
    }
}

fn strip(n: &INode) -> Node {
    Node { kind: n.kind, ch: n.ch.iter().map(strip).collect() }
}

/// Replace the vertex labeled `i` by `with`, returning its children.
fn replace(n: &mut INode, i: u8, with: &INode) -> Option<Vec<INode>> {
    if n.kind == Kind::Lab(i) {
        let old = std::mem::replace(n, with.clone());
        return Some(old.ch);
    }
    n.ch.iter_mut().find_map(|c| replace(c, i, with))
}

fn parity(seq: &[usize]) -> bool {
    let mut odd = false;
    for a in 0..seq.len() {
        for b in a + 1..seq.len() {
            odd ^= seq[a] > seq[b];
        }
    }
    odd
}

/// Non-decreasing sequences of length q over 0..s.
fn multisets(s: usize, q: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..q {
        out = out
            .into_iter()
            .flat_map(|v| {
                let lo = v.last().copied().unwrap_or(0);
                (lo..s).map(move |k| {
                    let mut w = v.clone();
                    w.push(k);
                    w
                })
            })
            .collect();
    }
    out
}

/// T′∘ᵢT: erase vertex i of T′, graft T on its edge and reattach the incoming
/// edges of i to non-root vertices of T keeping their order.
pub fn insert(tp: &BraceTree, i: usize, t: &BraceTree) -> Result<Elem<BraceTree>, Error> {
    let (k, n) = (tp.arity(), t.arity());
    if i == 0 || i > k {
        return Err(Error::Index(i));
    }
    let i8 = i as u8;
    let tp = tp.relabel(|j| Kind::Lab(if j > i8 { j + n as u8 - 1 } else { j }));
    let t = t.relabel(|l| Kind::Lab(l + i8 - 1));
    let mut next = 0;
    let mut outer = index(&tp.0, &mut next);
    let vi_id = {
        let mut ids = Vec::new();
        ids_preorder(&outer, &mut ids);
        let v = tp.vertices();
        ids[v.iter().position(|x| x.kind == Kind::Lab(i8)).unwrap()]
    };
    let mut inner_next = next - 1;
    let mut inner = index(&t.0, &mut inner_next);
    inner.id = vi_id;
    let placeholder = INode { kind: Kind::Neu, id: usize::MAX, ch: vec![] };
    let edges = replace(&mut outer, i8, &placeholder).unwrap();
    let slots = slot_count(&inner);
    let mut out = Elem::zero();
    for choice in multisets(slots, edges.len()) {
        let mut extra = vec![Vec::new(); slots];
        for (e, &s) in edges.iter().zip(&choice) {
            extra[s].push(e.clone());
        }
        let grown = attach(&inner, &extra, &mut 0);
        let mut whole = outer.clone();
        put_back(&mut whole, &grown);
        let mut ids = Vec::new();
        ids_preorder(&whole, &mut ids);
        out.add_term(BraceTree(strip(&whole)), sign(parity(&ids)));
    }
    Ok(out)
}

fn put_back(n: &mut INode, with: &INode) -> bool {
    if n.id == usize::MAX {
        *n = with.clone();
        return true;
    }
    n.ch.iter_mut().any(|c| put_back(c, with))
}

pub fn insert_elem(f: &Elem<BraceTree>, i: usize, g: &Elem<BraceTree>) -> Elem<BraceTree> {
    f.bilinear(g, |a, b| insert(a, i, b).unwrap_or_default())
}

/// Relabel j ↦ σ(j); edges are untouched, so there is no sign.
pub fn act(s: &Perm, t: &BraceTree) -> BraceTree {
    t.relabel(|j| Kind::Lab(s.apply(j as usize) as u8))
}

/// ∂T = −(−1)^{|T|} Σ_v T_v∘_{n+1}T_•• + T_{1•}∘₁T + T_{•1}∘₁T − (−1)^{|T|} Σᵢ T∘ᵢ(T_{1•} + T_{•1}).
pub fn twbt_diff(t: &BraceTree) -> Elem<BraceTree> {
    let n = t.arity();
    let s = -sign(t.degree() % 2 != 0);
    let mut out = Elem::zero();
    let bb = t_bb();
    let nv = t.neutral_count();
    for v in 0..nv {
        let tv = mark_neutral(t, v, n as u8 + 1);
        out.add_scaled(&insert(&tv, n + 1, &bb).unwrap(), &s);
    }
    let kappa = [t_1b(), t_b1()];
    for x in &kappa {
        out.add_assign(&insert(x, 1, t).unwrap());
    }
    for i in 1..=n {
        for x in &kappa {
            out.add_scaled(&insert(t, i, x).unwrap(), &s);
        }
    }
    out
}

/// The v-th neutral vertex (preorder) turned into label `label`.
fn mark_neutral(t: &BraceTree, v: usize, label: u8) -> BraceTree {
    fn go(n: &Node, v: usize, seen: &mut usize, label: u8) -> Node {
        let kind = if n.kind == Kind::Neu {
            *seen += 1;
            if *seen == v + 1 {
                Kind::Lab(label)
            } else {
                Kind::Neu
            }
        } else {
            n.kind
        };
        Node { kind, ch: n.ch.iter().map(|c| go(c, v, seen, label)).collect() }
    }
    BraceTree(go(&t.0, v, &mut 0, label))
}

/// ∂_Br: the TwBT differential with inadmissible trees dropped.
pub fn br_diff(t: &BraceTree) -> Result<Elem<BraceTree>, Error> {
    if !t.is_admissible() {
        return Err(Error::Precondition(format!("{} is not admissible", t)));
    }
    let mut d = twbt_diff(t);
    d.retain(|x| x.is_admissible());
    Ok(d)
}

fn forests(k: usize) -> Vec<Vec<Node>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for s in 1..=k {
        for first in shapes(s) {
            for rest in forests(k - s) {
                let mut f = vec![first.clone()];
                f.extend(rest);
                out.push(f);
            }
        }
    }
    out
}

/// Planar rooted trees with m vertices, all marked neutral.
fn shapes(m: usize) -> Vec<Node> {
    forests(m - 1).into_iter().map(Node::neu).collect()
}

fn fill(n: &Node, kinds: &[Kind], pos: &mut usize) -> Node {
    let kind = kinds[*pos];
    *pos += 1;
    Node { kind, ch: n.ch.iter().map(|c| fill(c, kinds, pos)).collect() }
}

fn subsets(m: usize, r: usize) -> Vec<Vec<bool>> {
    if r > m {
        return vec![];
    }
    if m == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for mut s in subsets(m - 1, r) {
        s.push(false);
        out.push(s);
    }
    if r > 0 {
        for mut s in subsets(m - 1, r - 1) {
            s.push(true);
            out.push(s);
        }
    }
    out
}

/// All brace trees with n labeled and r neutral vertices, in sorted order.
pub fn enumerate(n: usize, r: usize) -> Vec<BraceTree> {
    let m = n + r;
    if m == 0 {
        return vec![];
    }
    let mut out = Vec::new();
    let perms = all_perms(n);
    for shape in shapes(m) {
        for neutral in subsets(m, r) {
            for p in &perms {
                let mut labels = p.images().into_iter();
                let kinds: Vec<Kind> = neutral
                    .iter()
                    .map(|&b| if b { Kind::Neu } else { Kind::Lab(labels.next().unwrap() as u8) })
                    .collect();
                out.push(BraceTree(fill(&shape, &kinds, &mut 0)));
            }
        }
    }
    out.sort();
    out
}

/// T_∘∘ + σ₁₂T_∘∘, the image of the bracket of ΛLie.
pub fn phi2() -> Elem<BraceTree> {
    let t = t_oo();
    Elem::from_terms([(act(&Perm::transposition(2, 1, 2), &t), Q::one()), (t, Q::one())])
}

macro_rules! brace_operad {
    ($name:ident, $label:expr) => {
        impl Operad for $name {
            type B = BraceTree;
            fn name(&self) -> String {
                $label.to_string()
            }
            fn arity(&self, b: &BraceTree) -> usize {
                b.arity()
            }
            fn degree(&self, b: &BraceTree) -> i64 {
                b.degree()
            }
            fn compose(&self, f: &BraceTree, i: usize, g: &BraceTree) -> Elem<BraceTree> {
                insert(f, i, g).expect("slot in range")
            }
            fn act(&self, s: &Perm, f: &BraceTree) -> Elem<BraceTree> {
                Elem::basis(act(s, f))
            }
            fn unit(&self) -> BraceTree {
                t_id()
            }
            fn diff(&self, f: &BraceTree) -> Elem<BraceTree> {
                self.diff_tree(f)
            }
            fn has_diff(&self) -> bool {
                self.differential()
            }
            fn basis(&self, n: usize) -> Option<Vec<BraceTree>> {
                Some(self.trees(n))
            }
            fn phi(&self, n: usize) -> Elem<BraceTree> {
                if n == 2 {
                    phi2()
                } else {
                    Elem::zero()
                }
            }
        }
    };
}

/// Brace trees without neutral vertices; |T| = 1 − n, zero differential.
#[derive(Clone, Copy, Debug, Default)]
pub struct Bt;

/// Brace trees with neutral vertices. `cap` only bounds basis enumeration.
#[derive(Clone, Copy, Debug)]
pub struct TwBt {
    pub cap: usize,
}

/// The suboperad of admissible trees.
#[derive(Clone, Copy, Debug, Default)]
pub struct Br;

impl Bt {
    fn diff_tree(&self, _: &BraceTree) -> Elem<BraceTree> {
        Elem::zero()
    }
    fn differential(&self) -> bool {
        false
    }
    fn trees(&self, n: usize) -> Vec<BraceTree> {
        enumerate(n, 0)
    }
}

impl TwBt {
    fn diff_tree(&self, t: &BraceTree) -> Elem<BraceTree> {
        twbt_diff(t)
    }
    fn differential(&self) -> bool {
        true
    }
    fn trees(&self, n: usize) -> Vec<BraceTree> {
        (0..=self.cap).flat_map(|r| enumerate(n, r)).collect()
    }
}

impl Br {
    fn diff_tree(&self, t: &BraceTree) -> Elem<BraceTree> {
        br_diff(t).expect("admissible")
    }
    fn differential(&self) -> bool {
        true
    }
    fn trees(&self, n: usize) -> Vec<BraceTree> {
        (0..n).flat_map(|r| enumerate(n, r)).filter(|t| t.is_admissible()).collect()
    }
}

brace_operad!(Bt, "BT");
brace_operad!(TwBt, "TwBT");
brace_operad!(Br, "Br");

/// The neutral-vertex tree as Σ_{σ∈S_r} σ(T₀) in Tw BT, where T₀ numbers
/// the neutral vertices 1..r in preorder and shifts the labels by r.
pub fn to_tw(tw: &Tw<Bt>, t: &BraceTree) -> Elem<TB<Bt>> {
    let r = t.neutral_count();
    fn go(n: &Node, r: u8, seen: &mut u8) -> Node {
        let kind = match n.kind {
            Kind::Neu => {
                *seen += 1;
                Kind::Lab(*seen)
            }
            Kind::Lab(k) => Kind::Lab(k + r),
        };
        Node { kind, ch: n.ch.iter().map(|c| go(c, r, seen)).collect() }
    }
    let t0 = BraceTree(go(&t.0, r as u8, &mut 0));
    tw.invariant(r, &Elem::basis(t0))
}

/// Inverse of `to_tw` on invariant vectors.
pub fn from_tw(f: &Elem<TB<Bt>>) -> Elem<BraceTree> {
    let mut out = Elem::zero();
    for ((r, b), c) in f.iter() {
        let r8 = *r as u8;
        let t = b.relabel(|k| if k <= r8 { Kind::Neu } else { Kind::Lab(k - r8) });
        out.add_scaled(&Elem::basis(t), &(c / q(factorial(*r) as i64)));
    }
    out
}
