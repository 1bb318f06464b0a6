//! As, Com, Ger and ΛLie with their chosen bases.
//!
//! Ger(n) is written with products of degree 0 and brackets of degree −1. A
//! basis monomial is a product of right-nested blocks {b_{i1},{b_{i2},…,b_{ip}}}
//! whose largest index is last, blocks sorted by their maxima. Lie parts are
//! normalised through ψ into the free associative superalgebra on odd letters,
//! where the coordinate of a block is the coefficient of its word.

use crate::exactalg::{all_perms, koszul_odd_order, q, sign, Perm, Q};
use crate::operad::{Elem, Operad, Suspend};
use crate::Error;
use num::One;
use std::fmt;

/// As(n): words a_{σ(1)}…a_{σ(n)}.
#[derive(Clone, Copy, Debug, Default)]
pub struct As;

impl Operad for As {
    type B = Vec<u8>;

    fn name(&self) -> String {
        "As".into()
    }
    fn arity(&self, b: &Vec<u8>) -> usize {
        b.len()
    }
    fn degree(&self, _b: &Vec<u8>) -> i64 {
        0
    }
    fn compose(&self, f: &Vec<u8>, i: usize, g: &Vec<u8>) -> Elem<Vec<u8>> {
        let m = g.len() as u8;
        let i8 = i as u8;
        let mut w = Vec::with_capacity(f.len() + g.len() - 1);
        for &x in f {
            if x == i8 {
                w.extend(g.iter().map(|&y| y + i8 - 1));
            } else if x > i8 {
                w.push(x + m - 1);
            } else {
                w.push(x);
            }
        }
        Elem::basis(w)
    }
    fn act(&self, s: &Perm, f: &Vec<u8>) -> Elem<Vec<u8>> {
        Elem::basis(f.iter().map(|&x| s.apply(x as usize) as u8).collect())
    }
    fn unit(&self) -> Vec<u8> {
        vec![1]
    }
    fn basis(&self, n: usize) -> Option<Vec<Vec<u8>>> {
        Some(all_perms(n).into_iter().map(|p| p.images().into_iter().map(|x| x as u8).collect()).collect())
    }
}

/// ΛAs with the ΛLie → ΛAs map {a1,a2} ↦ m + σ₁₂m, m = a1a2.
pub fn lambda_as() -> Suspend<As> {
    let m = vec![1u8, 2];
    let base = Suspend::new(As, 1);
    let phi2 = Elem::basis(m.clone()).plus(&base.act(&Perm::transposition(2, 1, 2), &m));
    Suspend::new(As, 1).with_phi(vec![Elem::zero(), Elem::zero(), phi2]).named("ΛAs")
}

/// Com(n) is one-dimensional; the basis symbol is the arity.
#[derive(Clone, Copy, Debug, Default)]
pub struct Com;

impl Operad for Com {
    type B = usize;

    fn name(&self) -> String {
        "Com".into()
    }
    fn arity(&self, b: &usize) -> usize {
        *b
    }
    fn degree(&self, _b: &usize) -> i64 {
        0
    }
    fn compose(&self, f: &usize, _i: usize, g: &usize) -> Elem<usize> {
        Elem::basis(f + g - 1)
    }
    fn act(&self, _s: &Perm, f: &usize) -> Elem<usize> {
        Elem::basis(*f)
    }
    fn unit(&self) -> usize {
        1
    }
    fn basis(&self, n: usize) -> Option<Vec<usize>> {
        Some(if n == 0 { vec![] } else { vec![n] })
    }
}

/// A Ger basis monomial: blocks sorted by maximum, each block's maximum last.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GerMono(pub Vec<Vec<u8>>);

impl GerMono {
    pub fn arity(&self) -> usize {
        self.0.iter().map(|b| b.len()).sum()
    }
    pub fn degree(&self) -> i64 {
        self.0.iter().map(|b| 1 - b.len() as i64).sum()
    }
    pub fn is_product(&self) -> bool {
        self.0.iter().all(|b| b.len() == 1)
    }
    /// b1 b2 … bn.
    pub fn product(n: usize) -> GerMono {
        GerMono((1..=n as u8).map(|x| vec![x]).collect())
    }
    pub fn letter(x: u8) -> GerMono {
        GerMono(vec![vec![x]])
    }
    pub fn written(&self, letter: char) -> String {
        let mut s = String::new();
        for b in &self.0 {
            s.push_str(&block_written(b, letter));
        }
        s
    }
}

fn block_written(b: &[u8], letter: char) -> String {
    if b.len() == 1 {
        return format!("{}{}", letter, b[0]);
    }
    format!("{{{}{},{}}}", letter, b[0], block_written(&b[1..], letter))
}

impl fmt::Debug for GerMono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.written('a'))
    }
}

impl fmt::Display for GerMono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.written('a'))
    }
}

type Word = Vec<u8>;

/// ψ of a right-nested bracket word [x_{w1},[x_{w2},…,x_{wp}]].
fn psi_nested(w: &[u8]) -> Elem<Word> {
    if w.len() == 1 {
        return Elem::basis(w.to_vec());
    }
    let rest = psi_nested(&w[1..]);
    let x = Elem::basis(vec![w[0]]);
    supercommutator(&x, 1, &rest, w.len() - 1)
}

/// [A,B] = AB − (−1)^{ab}BA where a, b are the word lengths.
fn supercommutator(a: &Elem<Word>, la: usize, b: &Elem<Word>, lb: usize) -> Elem<Word> {
    let s = -sign(la * lb % 2 == 1);
    let mut out = Elem::zero();
    for (u, x) in a.iter() {
        for (v, y) in b.iter() {
            let c = x * y;
            let mut uv = u.clone();
            uv.extend_from_slice(v);
            out.add_term(uv, c.clone());
            let mut vu = v.clone();
            vu.extend_from_slice(u);
            out.add_term(vu, &s * c);
        }
    }
    out
}

/// Read block coordinates off a ψ-image: words ending in the maximal letter.
fn extract_blocks(p: &Elem<Word>) -> Elem<Word> {
    let mut out = Elem::zero();
    for (w, c) in p.iter() {
        let mx = *w.iter().max().unwrap();
        if *w.last().unwrap() == mx {
            out.add_term(w.clone(), c.clone());
        }
    }
    out
}

/// A right-nested word in arbitrary order, expanded in the block basis.
pub fn normalize_block(w: &[u8]) -> Elem<Word> {
    let mx = *w.iter().max().unwrap();
    if *w.last().unwrap() == mx {
        return Elem::basis(w.to_vec());
    }
    extract_blocks(&psi_nested(w))
}

/// {A,B} of two basis blocks, in the block basis.
pub fn bracket_blocks(a: &[u8], b: &[u8]) -> Elem<Word> {
    let (pa, pb) = (a.len(), b.len());
    // {A,B} = (−1)^{|A|}ψ⁻¹[ψA,ψB] with |A| = 1 − p_A
    let s = sign((1 + pa) % 2 == 1);
    let c = supercommutator(&psi_nested(a), pa, &psi_nested(b), pb);
    extract_blocks(&c).scale(&s)
}

/// Sort blocks by maxima with the Koszul sign (block of length p has parity p−1).
fn sort_blocks(blocks: Vec<Vec<u8>>) -> (GerMono, Q) {
    let degs: Vec<i64> = blocks.iter().map(|b| b.len() as i64 - 1).collect();
    let mut order: Vec<usize> = (0..blocks.len()).collect();
    order.sort_by_key(|&k| *blocks[k].last().unwrap());
    let s = sign(koszul_odd_order(&degs, &order));
    let mut sorted = Vec::with_capacity(blocks.len());
    let mut blocks: Vec<Option<Vec<u8>>> = blocks.into_iter().map(Some).collect();
    for k in order {
        sorted.push(blocks[k].take().unwrap());
    }
    (GerMono(sorted), s)
}

/// Product of Ger elements whose factors are lists of normalised blocks.
pub fn ger_mul(x: &Elem<GerMono>, y: &Elem<GerMono>) -> Elem<GerMono> {
    x.bilinear(y, |a, b| {
        let mut blocks = a.0.clone();
        blocks.extend(b.0.iter().cloned());
        let (m, s) = sort_blocks(blocks);
        Elem::term(m, s)
    })
}

/// Product of an ordered list of blocks given as linear combinations.
fn mul_block_list(parts: &[Elem<Word>]) -> Elem<GerMono> {
    let mut acc: Elem<Vec<Vec<u8>>> = Elem::basis(vec![]);
    for p in parts {
        acc = acc.bilinear(p, |bs, w| {
            let mut v = bs.clone();
            v.push(w.clone());
            Elem::basis(v)
        });
    }
    acc.map_basis(|bs| sort_blocks(bs.clone()))
}

/// {X,Y} on basis monomials by the Leibniz rule in both arguments.
pub fn ger_bracket_mono(x: &GerMono, y: &GerMono) -> Elem<GerMono> {
    let dx = x.degree();
    let mut out = Elem::zero();
    let mut before_y = 0i64;
    for (j, bj) in y.0.iter().enumerate() {
        let dbj = 1 - bj.len() as i64;
        // {X,Bj} = (−1)^{|X||Bj|}{Bj,X}
        let s1 = (before_y * (dx - 1) + dx * dbj).rem_euclid(2) == 1;
        let mut before_x = 0i64;
        for (i, ai) in x.0.iter().enumerate() {
            let s2 = (before_x * (dbj - 1)).rem_euclid(2) == 1;
            let br = bracket_blocks(bj, ai);
            if !br.is_zero() {
                let mut parts: Vec<Elem<Word>> = Vec::new();
                for b in &y.0[..j] {
                    parts.push(Elem::basis(b.clone()));
                }
                for a in &x.0[..i] {
                    parts.push(Elem::basis(a.clone()));
                }
                parts.push(br);
                for a in &x.0[i + 1..] {
                    parts.push(Elem::basis(a.clone()));
                }
                for b in &y.0[j + 1..] {
                    parts.push(Elem::basis(b.clone()));
                }
                out.add_scaled(&mul_block_list(&parts), &sign(s1 ^ s2));
            }
            before_x += 1 - ai.len() as i64;
        }
        before_y += dbj;
    }
    out
}

pub fn ger_bracket(x: &Elem<GerMono>, y: &Elem<GerMono>) -> Elem<GerMono> {
    x.bilinear(y, ger_bracket_mono)
}

/// Evaluate a right-nested block whose leaves are Ger elements.
fn eval_block(leaves: &[Elem<GerMono>]) -> Elem<GerMono> {
    let mut cur = leaves[leaves.len() - 1].clone();
    for l in leaves[..leaves.len() - 1].iter().rev() {
        cur = ger_bracket(l, &cur);
    }
    cur
}

/// Ger as an operad. No differential; φ₂ = {a1,a2}.
#[derive(Clone, Copy, Debug, Default)]
pub struct Ger;

impl Ger {
    /// f∘ᵢg on basis monomials: substitute g for a_i in the written form of f
    /// with sign (−1)^{|g|·#{ before a_i}, then normalise.
    fn insert(&self, f: &GerMono, i: usize, g: &Elem<GerMono>, gdeg: i64, m: usize) -> Elem<GerMono> {
        let i8 = i as u8;
        let relabel = |x: u8| -> u8 {
            if x > i8 {
                x + m as u8 - 1
            } else {
                x
            }
        };
        let gshift = g.map_basis(|b| (GerMono(b.0.iter().map(|bl| bl.iter().map(|&y| y + i8 - 1).collect()).collect()), Q::one()));
        let mut braces = 0i64;
        let mut found = false;
        let mut parts: Vec<Elem<GerMono>> = Vec::with_capacity(f.0.len());
        for blk in &f.0 {
            if let Some(pos) = blk.iter().position(|&x| x == i8) {
                braces += (pos + 1).min(blk.len() - 1) as i64;
                found = true;
                let leaves: Vec<Elem<GerMono>> = blk
                    .iter()
                    .map(|&x| if x == i8 { gshift.clone() } else { Elem::basis(GerMono::letter(relabel(x))) })
                    .collect();
                parts.push(eval_block(&leaves));
            } else {
                if !found {
                    braces += blk.len() as i64 - 1;
                }
                let nb: Vec<u8> = blk.iter().map(|&x| relabel(x)).collect();
                parts.push(Elem::basis(GerMono(vec![nb])));
            }
        }
        let mut acc = Elem::basis(GerMono(vec![]));
        for p in &parts {
            acc = ger_mul(&acc, p);
        }
        acc.scale(&sign((gdeg * braces).rem_euclid(2) == 1))
    }
}

pub fn ger_basis(n: usize) -> Vec<GerMono> {
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    // set partitions of 1..n, blocks listed by increasing maximum
    fn partitions(n: u8) -> Vec<Vec<Vec<u8>>> {
        let mut res: Vec<Vec<Vec<u8>>> = vec![vec![]];
        for x in 1..=n {
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
    for mut p in partitions(n as u8) {
        p.sort_by_key(|b| *b.iter().max().unwrap());
        let choices: Vec<Vec<Vec<u8>>> = p
            .iter()
            .map(|b| {
                let mx = *b.iter().max().unwrap();
                let rest: Vec<u8> = b.iter().copied().filter(|&x| x != mx).collect();
                all_perms(rest.len())
                    .into_iter()
                    .map(|s| {
                        let mut w: Vec<u8> = s.zero_based().iter().map(|&j| rest[j]).collect();
                        w.push(mx);
                        w
                    })
                    .collect()
            })
            .collect();
        let mut acc: Vec<Vec<Vec<u8>>> = vec![vec![]];
        for c in &choices {
            let mut next = Vec::new();
            for a in &acc {
                for w in c {
                    let mut a2 = a.clone();
                    a2.push(w.clone());
                    next.push(a2);
                }
            }
            acc = next;
        }
        out.extend(acc.into_iter().map(GerMono));
    }
    out.sort();
    out
}

pub fn ger_act(s: &Perm, f: &GerMono) -> Elem<GerMono> {
    let parts: Vec<Elem<Word>> = f
        .0
        .iter()
        .map(|b| {
            let w: Vec<u8> = b.iter().map(|&x| s.apply(x as usize) as u8).collect();
            normalize_block(&w)
        })
        .collect();
    mul_block_list(&parts)
}

impl Operad for Ger {
    type B = GerMono;

    fn name(&self) -> String {
        "Ger".into()
    }
    fn arity(&self, b: &GerMono) -> usize {
        b.arity()
    }
    fn degree(&self, b: &GerMono) -> i64 {
        b.degree()
    }
    fn compose(&self, f: &GerMono, i: usize, g: &GerMono) -> Elem<GerMono> {
        self.insert(f, i, &Elem::basis(g.clone()), g.degree(), g.arity())
    }
    fn act(&self, s: &Perm, f: &GerMono) -> Elem<GerMono> {
        ger_act(s, f)
    }
    fn unit(&self) -> GerMono {
        GerMono::letter(1)
    }
    fn basis(&self, n: usize) -> Option<Vec<GerMono>> {
        Some(ger_basis(n))
    }
    fn phi(&self, n: usize) -> Elem<GerMono> {
        if n == 2 {
            Elem::basis(GerMono(vec![vec![1, 2]]))
        } else {
            Elem::zero()
        }
    }
}

/// ΛLie: the single-block part of Ger.
#[derive(Clone, Copy, Debug, Default)]
pub struct LaLie;

impl Operad for LaLie {
    type B = GerMono;

    fn name(&self) -> String {
        "ΛLie".into()
    }
    fn arity(&self, b: &GerMono) -> usize {
        b.arity()
    }
    fn degree(&self, b: &GerMono) -> i64 {
        b.degree()
    }
    fn compose(&self, f: &GerMono, i: usize, g: &GerMono) -> Elem<GerMono> {
        Ger.compose(f, i, g)
    }
    fn act(&self, s: &Perm, f: &GerMono) -> Elem<GerMono> {
        ger_act(s, f)
    }
    fn unit(&self) -> GerMono {
        GerMono::letter(1)
    }
    fn basis(&self, n: usize) -> Option<Vec<GerMono>> {
        Some(ger_basis(n).into_iter().filter(|m| m.0.len() == 1).collect())
    }
    fn phi(&self, n: usize) -> Elem<GerMono> {
        Ger.phi(n)
    }
}

/// Parse a Ger monomial such as `{a2,a3}a1{a4,a5}` or `b1{b2,b3}` and normalise it.
pub fn parse_ger(s: &str) -> Result<Elem<GerMono>, Error> {
    let chars: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
    let mut pos = 0;
    let e = parse_product(&chars, &mut pos)?;
    if pos != chars.len() {
        return Err(Error::Parse(format!("trailing input at {} in {:?}", pos, s)));
    }
    Ok(e)
}

fn parse_product(c: &[char], pos: &mut usize) -> Result<Elem<GerMono>, Error> {
    let mut acc = Elem::basis(GerMono(vec![]));
    let mut any = false;
    while *pos < c.len() && c[*pos] != ',' && c[*pos] != '}' {
        let f = parse_factor(c, pos)?;
        acc = ger_mul(&acc, &f);
        any = true;
    }
    if !any {
        return Err(Error::Parse(format!("empty factor at {}", pos)));
    }
    Ok(acc)
}

fn parse_factor(c: &[char], pos: &mut usize) -> Result<Elem<GerMono>, Error> {
    match c.get(*pos) {
        Some('{') => {
            *pos += 1;
            let a = parse_product(c, pos)?;
            if c.get(*pos) != Some(&',') {
                return Err(Error::Parse(format!("expected ',' at {}", pos)));
            }
            *pos += 1;
            let b = parse_product(c, pos)?;
            if c.get(*pos) != Some(&'}') {
                return Err(Error::Parse(format!("expected '}}' at {}", pos)));
            }
            *pos += 1;
            Ok(ger_bracket(&a, &b))
        }
        Some('a') | Some('b') => {
            *pos += 1;
            let start = *pos;
            while *pos < c.len() && c[*pos].is_ascii_digit() {
                *pos += 1;
            }
            let n: u8 = c[start..*pos]
                .iter()
                .collect::<String>()
                .parse()
                .map_err(|_| Error::Parse(format!("bad letter index at {}", start)))?;
            Ok(Elem::basis(GerMono::letter(n)))
        }
        other => Err(Error::Parse(format!("unexpected {:?} at {}", other, pos))),
    }
}

/// Coefficients of the basis expansion, written out; handy in reports.
pub fn ger_to_string(e: &Elem<GerMono>) -> String {
    if e.is_zero() {
        return "0".into();
    }
    let mut parts = Vec::new();
    for (m, c) in e.iter() {
        parts.push(format!("{}*{}", crate::exactalg::fmt_q(c), m));
    }
    parts.join(" + ")
}

/// Λ^{-2}Ger, the operad whose dual cooperad generates Ger∞.
pub fn ger_desusp2() -> Suspend<Ger> {
    Suspend::new(Ger, -2).named("Λ^-2Ger")
}

/// Λ^{-2}Com, whose dual cooperad generates ΛLie∞.
pub fn com_desusp2() -> Suspend<Com> {
    Suspend::new(Com, -2).named("Λ^-2Com")
}

pub fn unit_q() -> Q {
    q(1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operad::check_operad_axioms;

    fn g(s: &str) -> Elem<GerMono> {
        parse_ger(s).unwrap()
    }

    #[test]
    fn ger_dimensions() {
        let f = [1usize, 1, 2, 6, 24, 120];
        for n in 1..=5 {
            assert_eq!(ger_basis(n).len(), f[n]);
            assert_eq!(LaLie.basis(n).unwrap().len(), f[n - 1]);
        }
    }

    #[test]
    fn bracket_symmetry_and_jacobi() {
        // {v1,v2} = (−1)^{|v1||v2|}{v2,v1} on letters: symmetric
        assert_eq!(g("{a2,a1}"), g("{a1,a2}"));
        let jac = g("{a1,{a2,a3}}").plus(&g("{a2,{a3,a1}}")).plus(&g("{a3,{a1,a2}}"));
        assert!(jac.is_zero());
        // product is commutative on degree-0 letters, brackets are odd
        assert_eq!(g("a2a1"), g("a1a2"));
        assert_eq!(g("{a3,a4}{a1,a2}"), g("{a1,a2}{a3,a4}").neg());
    }

    #[test]
    fn leibniz_rule() {
        // {a1, a2a3} = {a1,a2}a3 + a2{a1,a3}
        assert_eq!(g("{a1,a2a3}"), g("{a1,a2}a3").plus(&g("a2{a1,a3}")));
    }

    #[test]
    fn example_insertions() {
        let u = g("{a2,a3}a1{a4,a5}");
        let w = g("{a1,a2}");
        assert_eq!(Ger.compose_elem(&u, 2, &w), g("{{a2,a3},a4}a1{a5,a6}").neg());
        assert_eq!(Ger.compose_elem(&u, 4, &w), g("{a2,a3}a1{{a4,a5},a6}"));
        let lhs = Ger.compose_elem(&w, 1, &u);
        assert_eq!(lhs, g("{{a2,a3}a1{a4,a5},a6}"));
        let rhs = g("{a6,{a2,a3}}a1{a4,a5}")
            .minus(&g("{a2,a3}{a6,a1}{a4,a5}"))
            .minus(&g("{a2,a3}a1{a6,{a4,a5}}"));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn ger_axioms() {
        let r = check_operad_axioms(&Ger, 4, 12, 7);
        assert!(r.passed(), "{:?}", r.failures);
        let r = check_operad_axioms(&LaLie, 4, 12, 8);
        assert!(r.passed(), "{:?}", r.failures);
    }

    #[test]
    fn as_and_lambda_as() {
        assert_eq!(As.compose(&vec![1, 2], 1, &vec![1, 2]), Elem::basis(vec![1, 2, 3]));
        assert!(check_operad_axioms(&As, 4, 12, 1).passed());
        let la = lambda_as();
        assert!(check_operad_axioms(&la, 4, 12, 2).passed());
        // (v1v2)v3 = −(−1)^{|v1|}v1(v2v3) on degree-0 dummies
        let m = vec![1u8, 2];
        assert_eq!(la.compose(&m, 1, &m), la.compose(&m, 2, &m).neg());
        // φ₂ is symmetric
        let p = la.phi(2);
        assert_eq!(la.act_elem(&Perm::transposition(2, 1, 2), &p), p);
    }

    #[test]
    fn lalie_generator_is_symmetric_of_degree_minus_one() {
        let b = GerMono(vec![vec![1, 2]]);
        assert_eq!(LaLie.degree(&b), -1);
        assert_eq!(LaLie.act(&Perm::transposition(2, 1, 2), &b), Elem::basis(b));
    }

    #[test]
    fn distributive_identity() {
        // {a1,a2}∘₂γ = (−1)^{|γ|} Σᵢ ς_{1,i}(γ∘ᵢ{a1,a2})
        let br = GerMono(vec![vec![1, 2]]);
        for n in 1..=3 {
            for gm in ger_basis(n) {
                let lhs = Ger.compose(&br, 2, &gm);
                let mut rhs = Elem::zero();
                for i in 1..=n {
                    let c = Perm::cycle(n + 1, 1, i);
                    rhs.add_assign(&Ger.act_elem(&c, &Ger.compose(&gm, i, &br)));
                }
                let rhs = rhs.scale(&sign(gm.degree() % 2 != 0));
                assert_eq!(lhs, rhs, "γ = {:?}", gm);
            }
        }
    }

    #[test]
    fn desuspended_degrees() {
        let d = ger_desusp2();
        assert_eq!(d.degree(&GerMono::product(3)), 4);
        assert_eq!(d.degree(&GerMono(vec![vec![1, 2]])), 1);
        assert_eq!(com_desusp2().degree(&4), 6);
        for n in 1..=4 {
            assert_eq!(d.basis(n).unwrap().len(), Ger.basis(n).unwrap().len());
        }
    }
}
