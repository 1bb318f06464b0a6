//! Labeled planar trees, their canonical orders, the groupoid of two-vertex trees and grafting.

use crate::exactalg::{multi_shuffles, Perm};
use crate::operad::{Elem, Operad};
use crate::Error;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vertex {
    pub parent: Option<usize>,
    pub children: Vec<usize>,
    pub label: Option<usize>,
}

/// A planar tree whose vertex 0 is the root of valency 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PlanarTree {
    pub v: Vec<Vertex>,
}

impl PlanarTree {
    /// The corolla with n labeled leaves.
    pub fn corolla(n: usize) -> PlanarTree {
        let mut t = PlanarTree::rooted();
        let c = t.add_child(0, None);
        for k in 1..=n {
            t.add_child(c, Some(k));
        }
        t
    }

    pub fn rooted() -> PlanarTree {
        PlanarTree { v: vec![Vertex { parent: None, children: vec![], label: None }] }
    }

    pub fn add_child(&mut self, parent: usize, label: Option<usize>) -> usize {
        let id = self.v.len();
        self.v.push(Vertex { parent: Some(parent), children: vec![], label });
        self.v[parent].children.push(id);
        id
    }

    /// t_{n,k,i}: an n-corolla with a k-corolla grafted on its i-th leaf.
    pub fn t_nki(n: usize, k: usize, i: usize) -> PlanarTree {
        let mut t = PlanarTree::rooted();
        let a = t.add_child(0, None);
        for j in 1..=n {
            if j == i {
                let b = t.add_child(a, None);
                for l in 0..k {
                    t.add_child(b, Some(i + l));
                }
            } else if j < i {
                t.add_child(a, Some(j));
            } else {
                t.add_child(a, Some(j + k - 1));
            }
        }
        t
    }

    pub fn is_leaf(&self, x: usize) -> bool {
        x != 0 && self.v[x].children.is_empty()
    }

    /// Nodal vertices: neither the root nor a leaf.
    pub fn is_nodal(&self, x: usize) -> bool {
        x != 0 && !self.v[x].children.is_empty()
    }

    /// Root first, then depth-first in planar order.
    pub fn vertex_order(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.v.len());
        let mut stack = vec![0];
        while let Some(x) = stack.pop() {
            out.push(x);
            for &c in self.v[x].children.iter().rev() {
                stack.push(c);
            }
        }
        out
    }

    /// Edges named by their source vertex (the end away from the root).
    pub fn canonical_edge_order(&self) -> Vec<usize> {
        self.vertex_order().into_iter().filter(|&x| x != 0).collect()
    }

    pub fn nodal_vertices(&self) -> Vec<usize> {
        self.vertex_order().into_iter().filter(|&x| self.is_nodal(x)).collect()
    }

    pub fn leaves(&self) -> Vec<usize> {
        self.vertex_order().into_iter().filter(|&x| self.is_leaf(x)).collect()
    }

    pub fn check(&self) -> Result<(), Error> {
        if self.v.is_empty() || self.v[0].children.len() != 1 {
            return Err(Error::Precondition("root must have valency 1".into()));
        }
        if self.vertex_order().len() != self.v.len() {
            return Err(Error::Precondition("tree is not connected".into()));
        }
        let mut labels: Vec<usize> = self.v.iter().filter_map(|x| x.label).collect();
        labels.sort();
        if labels.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Precondition("labels repeat".into()));
        }
        for (k, x) in self.v.iter().enumerate() {
            if x.label.is_some() && !self.is_leaf(k) {
                return Err(Error::Precondition(format!("labeled vertex {} is not a leaf", k)));
            }
        }
        Ok(())
    }

    pub fn to_sexpr(&self) -> String {
        fn go(t: &PlanarTree, x: usize, s: &mut String) {
            if let Some(l) = t.v[x].label {
                s.push_str(&format!("L{}", l));
                return;
            }
            s.push_str(if x == 0 { "(root" } else { "(v" });
            for &c in &t.v[x].children {
                s.push(' ');
                go(t, c, s);
            }
            s.push(')');
        }
        let mut s = String::new();
        go(self, 0, &mut s);
        s
    }

    pub fn from_sexpr(src: &str) -> Result<PlanarTree, Error> {
        let toks = tokenize(src);
        let mut pos = 0;
        let mut t = PlanarTree { v: vec![] };
        parse_node(&toks, &mut pos, &mut t, None)?;
        if pos != toks.len() {
            return Err(Error::Parse("trailing tokens".into()));
        }
        t.check()?;
        Ok(t)
    }
}

pub(crate) fn tokenize(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    for c in s.chars() {
        match c {
            '(' | ')' => {
                if !cur.is_empty() {
                    out.push(std::mem::take(&mut cur));
                }
                out.push(c.to_string());
            }
            c if c.is_whitespace() => {
                if !cur.is_empty() {
                    out.push(std::mem::take(&mut cur));
                }
            }
            c => cur.push(c),
        }
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

pub(crate) fn parse_label(tok: &str) -> Option<usize> {
    tok.strip_prefix('L').and_then(|d| d.parse().ok())
}

fn parse_node(toks: &[String], pos: &mut usize, t: &mut PlanarTree, parent: Option<usize>) -> Result<(), Error> {
    let tok = toks.get(*pos).ok_or_else(|| Error::Parse("unexpected end".into()))?;
    if let Some(l) = parse_label(tok) {
        *pos += 1;
        let id = t.v.len();
        t.v.push(Vertex { parent, children: vec![], label: Some(l) });
        if let Some(p) = parent {
            t.v[p].children.push(id);
        }
        return Ok(());
    }
    if tok != "(" {
        return Err(Error::Parse(format!("unexpected token {:?}", tok)));
    }
    *pos += 1;
    let head = toks.get(*pos).ok_or_else(|| Error::Parse("unexpected end".into()))?;
    match (head.as_str(), parent) {
        ("root", None) | ("v", Some(_)) => {}
        _ => return Err(Error::Parse(format!("unexpected head {:?}", head))),
    }
    *pos += 1;
    let id = t.v.len();
    t.v.push(Vertex { parent, children: vec![], label: None });
    if let Some(p) = parent {
        t.v[p].children.push(id);
    }
    while toks.get(*pos).map(|s| s.as_str()) != Some(")") {
        if *pos >= toks.len() {
            return Err(Error::Parse("unbalanced parentheses".into()));
        }
        parse_node(toks, pos, t, Some(id))?;
    }
    *pos += 1;
    Ok(())
}

/// An isomorphism class of two-nodal-vertex trees: a (p, n−p)-shuffle.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tree2Class {
    pub p: usize,
    pub shuffle: Perm,
}

pub fn enumerate_tree2(n: usize) -> Vec<Tree2Class> {
    let mut out = Vec::new();
    for p in 0..=n {
        for s in multi_shuffles(&[p, n - p]) {
            out.push(Tree2Class { p, shuffle: s });
        }
    }
    out
}

/// μ_t: compose the elements on the nodal vertices along t.
///
/// Elements are listed in canonical vertex order; the value at a vertex is
/// ((f∘₁c₁)∘_{1+m₁}c₂)… over its children, and the leaves are finally
/// relabeled by their labels.
pub fn graft<O: Operad>(t: &PlanarTree, slots: &[Elem<O::B>], op: &O) -> Result<Elem<O::B>, Error> {
    t.check()?;
    let nodal = t.nodal_vertices();
    if nodal.len() != slots.len() {
        return Err(Error::Arity(format!("{} nodal vertices, {} elements", nodal.len(), slots.len())));
    }
    for (k, &x) in nodal.iter().enumerate() {
        let want = t.v[x].children.len();
        if let Some((b, _)) = slots[k].iter().next() {
            if op.arity(b) != want {
                return Err(Error::Arity(format!("nodal vertex {} has {} inputs", k + 1, want)));
            }
        }
    }
    let index = |x: usize| nodal.iter().position(|&y| y == x).unwrap();
    fn value<O: Operad>(t: &PlanarTree, x: usize, slots: &[Elem<O::B>], op: &O, index: &dyn Fn(usize) -> usize) -> (Elem<O::B>, usize) {
        let mut acc = slots[index(x)].clone();
        let mut pos = 1;
        for &c in &t.v[x].children {
            if t.is_leaf(c) {
                pos += 1;
                continue;
            }
            let (cv, m) = value(t, c, slots, op, index);
            acc = op.compose_elem(&acc, pos, &cv);
            pos += m;
        }
        (acc, pos - 1)
    }
    let top = t.v[0].children[0];
    if t.is_leaf(top) {
        return Ok(Elem::basis(op.unit()));
    }
    let (val, n) = value(t, top, slots, op, &index);
    let labels: Vec<usize> = t.leaves().iter().map(|&x| t.v[x].label.unwrap_or(0)).collect();
    if labels.len() != n || labels.contains(&0) {
        return Err(Error::Precondition("every leaf needs a label".into()));
    }
    Ok(op.act_elem(&Perm::from_images(&labels), &val))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::{Ger, GerMono};
    use crate::exactalg::binomial;

    #[test]
    fn edge_order_is_preorder_without_root() {
        let t = PlanarTree::corolla(1);
        assert_eq!(t.canonical_edge_order(), vec![1, 2]);
        let t = PlanarTree::t_nki(2, 2, 1);
        // independent recursive traversal
        fn rec(t: &PlanarTree, x: usize, out: &mut Vec<usize>) {
            if x != 0 {
                out.push(x);
            }
            for &c in &t.v[x].children {
                rec(t, c, out);
            }
        }
        let mut r = Vec::new();
        rec(&t, 0, &mut r);
        assert_eq!(t.canonical_edge_order(), r);
        let mut t2 = t.clone();
        for x in t2.v.iter_mut() {
            x.label = x.label.map(|l| 5 - l);
        }
        assert_eq!(t2.canonical_edge_order(), t.canonical_edge_order());
    }

    #[test]
    fn tree2_counts() {
        assert_eq!(enumerate_tree2(0).len(), 1);
        assert_eq!(enumerate_tree2(2).len(), 4);
        let n = 3;
        let s: u64 = (0..=n).map(|p| binomial(n, p)).sum();
        assert_eq!(enumerate_tree2(n).len() as u64, s);
    }

    #[test]
    fn sexpr_round_trip() {
        let t = PlanarTree::t_nki(3, 2, 2);
        let s = t.to_sexpr();
        assert_eq!(s, "(root (v L1 (v L2 L3) L4))");
        assert_eq!(PlanarTree::from_sexpr(&s).unwrap().to_sexpr(), s);
        assert!(PlanarTree::from_sexpr("(root L1 L2)").is_err());
    }

    #[test]
    fn graft_is_elementary_insertion() {
        let f = Elem::basis(GerMono(vec![vec![2], vec![1, 3]]));
        let g = Elem::basis(GerMono(vec![vec![1, 2]]));
        for i in 1..=3 {
            let t = PlanarTree::t_nki(3, 2, i);
            assert_eq!(graft(&t, &[f.clone(), g.clone()], &Ger).unwrap(), Ger.compose_elem(&f, i, &g));
        }
        let c = PlanarTree::corolla(3);
        assert_eq!(graft(&c, &[f.clone()], &Ger).unwrap(), f);
        let bad = graft(&PlanarTree::t_nki(3, 2, 1), &[g.clone(), g.clone()], &Ger);
        assert!(matches!(bad, Err(Error::Arity(_))));
    }

    #[test]
    fn graft_matches_both_associativity_sides() {
        // A with B on slot 1 and C on slot 2
        let mut t = PlanarTree::rooted();
        let a = t.add_child(0, None);
        let b = t.add_child(a, None);
        t.add_child(b, Some(1));
        t.add_child(b, Some(2));
        let c = t.add_child(a, None);
        t.add_child(c, Some(3));
        t.add_child(c, Some(4));
        let br = Elem::basis(GerMono(vec![vec![1, 2]]));
        let pr = Elem::basis(GerMono(vec![vec![1], vec![2]]));
        let v = graft(&t, &[br.clone(), br.clone(), pr.clone()], &Ger).unwrap();
        let lhs = Ger.compose_elem(&Ger.compose_elem(&br, 1, &br), 3, &pr);
        let rhs = Ger.compose_elem(&Ger.compose_elem(&br, 2, &pr), 1, &br);
        assert_eq!(v, lhs);
        // (−1)^{|g||h|} with |pr| = 0
        assert_eq!(lhs, rhs);
    }
}
