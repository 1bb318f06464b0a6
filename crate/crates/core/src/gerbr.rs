//! Maps Ger∞ → TwBT: the morphism file, the arity-3 solve, F′ = Tw(η∘F)∘c,
//! and the forbidden-monomial test on the Maurer-Cartan element of η∘F.
//!
//! A map is stored by its values on the generators s w* of Ger∞ = Cobar(Λ^{-2}Ger*),
//! w running over the Ger monomial basis; values are neutral-vertex trees.

use crate::brace::{enumerate, from_tw, insert, phi2, t_cup, t_cup_opp, to_tw, BraceTree, Bt, Kind, Node, TwBt};
use crate::classical::{GerMono, Ger};
use crate::cobar::{ger_inf, GerInf};
use crate::conv::{act_pair, from_generators, mc_residual, prelie, prelie_coinv, Conv, CobarMorphism, Pair};
use crate::exactalg::{all_perms, fmt_q, parse_q, Q};
use crate::homology::{independent, Echelon};
use crate::operad::{Elem, Operad, Suspend};
use crate::twisting::{alpha_ger, coproduct, f_prime, tw_of_morphism, Tw, TB};
use crate::Error;
use num::One;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

pub type GerDual = Suspend<Ger>;
pub type GerToTwBt = CobarMorphism<TwBt, GerDual>;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct TermJson {
    pub tree: String,
    pub coeff: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct GeneratorJson {
    /// Blocks of the Ger monomial w; each block is a right-nested bracket
    /// ending in its largest letter.
    pub w: Vec<Vec<u8>>,
    pub image: Vec<TermJson>,
}

/// `{"max_arity": N, "generators": [{"w": [[1],[2,3]], "image": [{"tree": "(root …)", "coeff": "1/2"}]}]}`
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct MorphismFile {
    pub max_arity: usize,
    pub generators: Vec<GeneratorJson>,
}

pub fn to_file(f: &GerToTwBt) -> MorphismFile {
    let mut gens: Vec<GeneratorJson> = f
        .images
        .iter()
        .filter(|(_, e)| !e.is_zero())
        .map(|(w, e)| GeneratorJson {
            w: w.0.clone(),
            image: e.iter().map(|(t, c)| TermJson { tree: t.to_sexpr(), coeff: fmt_q(c) }).collect(),
        })
        .collect();
    gens.sort_by(|a, b| (a.w.iter().map(Vec::len).sum::<usize>(), &a.w).cmp(&(b.w.iter().map(Vec::len).sum(), &b.w)));
    MorphismFile { max_arity: f.max_arity, generators: gens }
}

pub fn from_file(m: &MorphismFile) -> Result<GerToTwBt, Error> {
    let g = ger_inf();
    let mut images = HashMap::new();
    for gen in &m.generators {
        let w = GerMono(gen.w.clone());
        let n = w.arity();
        if n < 2 || n > m.max_arity || !g.d_basis(n).contains(&w) {
            return Err(Error::Parse(format!("{:?} is not a basis monomial of arity 2..={}", w, m.max_arity)));
        }
        let mut e = Elem::zero();
        for t in &gen.image {
            let tree = BraceTree::parse(&t.tree)?;
            if tree.arity() != n {
                return Err(Error::Arity(format!("{} in the image of {:?}", t.tree, w)));
            }
            let c = parse_q(&t.coeff).ok_or_else(|| Error::Parse(format!("coefficient {:?}", t.coeff)))?;
            e.add_term(tree, c);
        }
        images.insert(w, e);
    }
    Ok(CobarMorphism { images, max_arity: m.max_arity })
}

pub fn load(path: &std::path::Path) -> Result<GerToTwBt, Error> {
    let m: MorphismFile = serde_json::from_str(&std::fs::read_to_string(path)?)?;
    from_file(&m)
}

/// The arity-2 part: s(b₁b₂)* ↦ T_∘∘ + σ₁₂T_∘∘, s{b₁,b₂}* ↦ T_∪ + T_∪opp.
pub fn arity_two() -> GerToTwBt {
    let mut images = HashMap::new();
    images.insert(GerMono::product(2), phi2());
    images.insert(GerMono(vec![vec![1, 2]]), Elem::from_terms([(t_cup(), Q::one()), (t_cup_opp(), Q::one())]));
    CobarMorphism { images, max_arity: 2 }
}

fn symmetrized(v: &BraceTree, w: &GerMono, d: &GerDual) -> Elem<Pair<TwBt, GerDual>> {
    let x = Elem::basis((v.clone(), w.clone()));
    let p = TwBt { cap: 0 };
    let mut out = Elem::zero();
    for s in all_perms(3) {
        out.add_assign(&act_pair(&p, d, &s, &x));
    }
    out
}

fn eta_conv(x: &Conv<TwBt, GerDual>) -> Conv<Bt, GerDual> {
    let mut out = Conv::zero();
    for (&n, e) in &x.comps {
        let mut e = e.clone();
        e.retain(|(t, _)| t.neutral_count() == 0);
        out.add_at(n, &e);
    }
    out
}

/// Extend `arity_two` to arity 3: solve ∂x₃ = −(x₂•x₂)₃ in TwBT together with
/// (α₂•α₃ + α₃•α₂)₄ = 0 for α = η∘x in BT, which every genuine morphism
/// satisfies. Free parameters are set to zero.
pub fn solve_arity_three() -> Result<GerToTwBt, Error> {
    solve_arity_three_with(true)
}

pub fn solve_arity_three_with(bt_constraint: bool) -> Result<GerToTwBt, Error> {
    let g = ger_inf();
    let d = &g.d;
    let p = TwBt { cap: 3 };
    let x2 = arity_two().to_conv(&g);
    let target = mc_residual(&p, d, &x2, true, 3)?.component(3);
    let alpha2 = eta_conv(&x2);

    let mut raw = Vec::new();
    for w in g.d_basis(3).iter() {
        for r in 0..=2 {
            for t in enumerate(3, r) {
                raw.push(symmetrized(&t, w, d));
            }
        }
    }
    let cols = independent(raw);
    let keyed = |tag: u8, e: &Elem<Pair<TwBt, GerDual>>| e.map_basis(|k| ((tag, k.clone()), Q::one()));
    let mut ech = Echelon::new();
    for (k, col) in cols.iter().enumerate() {
        let mut x = Conv::<TwBt, GerDual>::zero();
        x.add_at(3, col);
        let dx = crate::conv::conv_diff(&p, &x).component(3);
        let a3 = eta_conv(&x);
        let q4 = prelie(&Bt, d, &alpha2, &a3, 4).plus(&prelie(&Bt, d, &a3, &alpha2, 4)).component(4);
        let q4 = q4.map_basis(|(t, w)| ((t.clone(), w.clone()), Q::one()));
        let mut v = keyed(0, &dx);
        if bt_constraint {
            v.add_assign(&keyed(1, &q4));
        }
        ech.insert(&v, k);
    }
    let coeffs = ech
        .express(&keyed(0, &target).neg())
        .ok_or_else(|| Error::Precondition("the arity-3 Maurer-Cartan system has no solution".into()))?;
    let mut x3 = Elem::zero();
    for (k, c) in coeffs.iter() {
        x3.add_scaled(&cols[*k], c);
    }
    let mut f = arity_two();
    f.max_arity = 3;
    for ((t, w), c) in x3.iter() {
        f.images.entry(w.clone()).or_default().add_term(t.clone(), c.clone());
    }
    Ok(f)
}

/// f = η∘F: the part without neutral vertices.
pub fn eta_part(f: &GerToTwBt) -> CobarMorphism<Bt, GerDual> {
    let images = f
        .images
        .iter()
        .map(|(w, e)| {
            let mut e = e.clone();
            e.retain(|t| t.neutral_count() == 0);
            (w.clone(), e)
        })
        .collect();
    CobarMorphism { images, max_arity: f.max_arity }
}

/// The generic Tw BT form of a map into neutral-vertex trees.
pub fn to_generic(tw: &Tw<Bt>, f: &GerToTwBt) -> CobarMorphism<Tw<Bt>, GerDual> {
    let images = f.images.iter().map(|(w, e)| (w.clone(), e.map_linear(|t| to_tw(tw, t)))).collect();
    CobarMorphism { images, max_arity: f.max_arity }
}

pub fn from_generic(f: &CobarMorphism<Tw<Bt>, GerDual>) -> GerToTwBt {
    let images = f.images.iter().map(|(w, e)| (w.clone(), from_tw(e))).collect();
    CobarMorphism { images, max_arity: f.max_arity }
}

/// F′ = Tw(η∘F)∘c with c the coalgebra structure of Ger∞, in both forms.
pub fn f_prime_bt(tw_g: &Tw<GerInf>, f: &GerToTwBt) -> Result<(CobarMorphism<Tw<Bt>, GerDual>, GerToTwBt), Error> {
    let c = crate::conv::morphism_from_mc(tw_g, &tw_g.base.d, &alpha_ger(tw_g, f.max_arity), f.max_arity)?;
    let generic = f_prime(&Bt, tw_g, &c, &eta_part(f));
    let trees = from_generic(&generic);
    Ok((generic, trees))
}

/// Vertex i univalent: hang a new vertex i+1 on it. Bivalent: put the new
/// vertex i+1 between i and its child. Labels above i move up by one.
pub fn v_surgery(t: &BraceTree, i: usize) -> Option<BraceTree> {
    fn go(n: &Node, i: u8, found: &mut bool) -> Node {
        let kind = match n.kind {
            Kind::Lab(k) if k > i => Kind::Lab(k + 1),
            k => k,
        };
        let mut ch: Vec<Node> = n.ch.iter().map(|c| go(c, i, found)).collect();
        if n.kind == Kind::Lab(i) && ch.len() <= 1 {
            *found = true;
            ch = vec![Node { kind: Kind::Lab(i + 1), ch }];
        }
        Node { kind, ch }
    }
    let mut found = false;
    let out = BraceTree(go(&t.0, i as u8, &mut found));
    found.then_some(out)
}

/// Labels agree with the planar order of the vertices.
pub fn is_ordered(t: &BraceTree) -> bool {
    t.vertices().iter().enumerate().all(|(j, v)| v.kind == Kind::Lab(j as u8 + 1))
}

#[derive(Clone, Debug, Serialize)]
pub struct Flag {
    pub tree: String,
    pub w: String,
    pub coeff: String,
    pub vertex: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ForbiddenReport {
    pub clean: bool,
    pub terms_checked: usize,
    pub flagged: Vec<Flag>,
}

/// The singleton letter i of a monomial b_i·v(rest) with |rest| ≥ 2.
fn lone_letter(w: &GerMono) -> Option<u8> {
    if w.0.len() != 2 || w.arity() < 3 {
        return None;
    }
    w.0.iter().find(|b| b.len() == 1).map(|b| b[0])
}

/// Decompose the MC element α (invariant form) in the basis T ⊗ w with T
/// ordered, i.e. Av⁻¹(α), and flag T ⊗ bᵢv(…) where vertex i has valency ≤ 2.
pub fn forbidden_monomial_check(alpha: &Conv<Bt, GerDual>) -> Result<ForbiddenReport, Error> {
    let want = from_generators::<Bt, GerDual>(&ger_inf(), 2, |w| if w.0.len() == 2 { phi2() } else { Elem::zero() });
    if alpha.component(2) != want.component(2) {
        return Err(Error::Precondition("arity-2 part is not T_∘∘ ⊗ b₁b₂ + σ₁₂T_∘∘ ⊗ b₁b₂".into()));
    }
    let mut flagged = Vec::new();
    let mut checked = 0;
    for (&n, e) in &alpha.comps {
        if n < 3 {
            continue;
        }
        for ((t, w), c) in e.iter() {
            if !is_ordered(t) {
                continue;
            }
            checked += 1;
            if let Some(i) = lone_letter(w) {
                let v = t.vertices().into_iter().find(|v| v.kind == Kind::Lab(i)).unwrap();
                if v.ch.len() <= 1 {
                    flagged.push(Flag { tree: t.to_sexpr(), w: w.written('b'), coeff: fmt_q(c), vertex: i as usize });
                }
            }
        }
    }
    Ok(ForbiddenReport { clean: flagged.is_empty(), terms_checked: checked, flagged })
}

/// The coinvariant residual α•′α of Av⁻¹(α), for the cancellation argument.
pub fn coinvariant_residual(y: &Conv<Bt, GerDual>, max_arity: usize) -> Conv<Bt, GerDual> {
    prelie_coinv(&Bt, &ger_inf().d, y, y, max_arity)
}

/// Ordered-tree representative of each coinvariant class.
pub fn canonical_coinv(e: &Elem<Pair<Bt, GerDual>>, n: usize, d: &GerDual) -> Elem<Pair<Bt, GerDual>> {
    let perms = all_perms(n);
    let mut out = Elem::zero();
    for (k, c) in e.iter() {
        let x = Elem::basis(k.clone());
        let s = perms
            .iter()
            .find(|s| is_ordered(&crate::brace::act(s, &k.0)))
            .expect("every labelled tree has an ordering relabelling");
        out.add_assign(&act_pair(&Bt, d, s, &x).scale(c));
    }
    out
}

/// Plant T ⊗ bᵢv into the ordered part of α and read the coefficient of
/// Vᵢ(T) ⊗ bᵢb_{i+1}v′ in the arity-(n+1) coinvariant residual. Nonzero means
/// nothing else can cancel it, so α plus the planted term is not MC.
pub fn planted_coefficient(alpha: &Conv<Bt, GerDual>, t: &BraceTree, w: &GerMono) -> Result<Q, Error> {
    let i = lone_letter(w).ok_or_else(|| Error::Precondition(format!("{} is not bᵢ·v(…)", w.written('b'))))?;
    let vt = v_surgery(t, i as usize).ok_or_else(|| Error::Precondition(format!("vertex {i} of {} has two children", t.to_sexpr())))?;
    let g = ger_inf();
    let n = t.arity();
    let mut y = Conv::<Bt, GerDual>::zero();
    for (&m, e) in &alpha.comps {
        let mut e = e.clone();
        e.retain(|(t, _)| is_ordered(t));
        y.add_at(m, &e);
    }
    y.add_at(n, &Elem::basis((t.clone(), w.clone())));
    let res = coinvariant_residual(&y, n + 1).component(n + 1);
    let res = canonical_coinv(&res, n + 1, &g.d);
    // bᵢ∘ᵢ(bᵢb_{i+1}) with the rest relabelled
    let product = GerMono::product(2);
    let wv = g.d.compose(w, i as usize, &product);
    let mut coeff = Q::from_integer(0.into());
    for (w2, c) in wv.iter() {
        coeff += c * res.coeff(&(vt.clone(), w2.clone()));
    }
    Ok(coeff)
}

#[derive(Clone, Debug, Serialize)]
pub struct FPrimeReport {
    pub max_arity: usize,
    pub input_mc: bool,
    pub input_f_tcc: bool,
    pub output_mc: bool,
    pub image_in_br: bool,
    pub eta_preserved: bool,
    pub coalgebra_morphism: bool,
    pub forbidden: ForbiddenReport,
}

impl FPrimeReport {
    pub fn passed(&self) -> bool {
        self.input_mc
            && self.input_f_tcc
            && self.output_mc
            && self.image_in_br
            && self.eta_preserved
            && self.coalgebra_morphism
            && self.forbidden.clean
    }
}

/// Residual components that are exact for a map known up to `max` on generators:
/// at arity n only r ≤ max − n neutral vertices.
fn windowed_residual_zero(f: &GerToTwBt, g: &GerInf) -> Result<bool, Error> {
    let p = TwBt { cap: f.max_arity };
    let res = mc_residual(&p, &g.d, &f.to_conv(g), true, f.max_arity)?;
    Ok(res.comps.iter().all(|(n, e)| e.iter().all(|((t, _), _)| t.neutral_count() + n > f.max_arity)))
}

pub fn run_pipeline(f: &GerToTwBt) -> Result<(FPrimeReport, GerToTwBt), Error> {
    let tw_g = Tw::new(ger_inf(), f.max_arity);
    let g = &tw_g.base;
    let input_mc = windowed_residual_zero(f, g)?;
    let input_f_tcc = f.image(&GerMono::product(2)) == phi2();
    let (generic, fp) = f_prime_bt(&tw_g, f)?;
    let output_mc = windowed_residual_zero(&fp, g)?;
    let image_in_br = fp.images.values().all(|e| e.iter().all(|(t, _)| t.is_admissible()));
    let eta_preserved = eta_part(&fp).images.iter().all(|(w, e)| *e == eta_part(f).image(w))
        && eta_part(f).images.iter().all(|(w, e)| e.is_zero() || fp.images.contains_key(w));

    // 𝔇∘F′ = Tw(F′)∘c, compared where both sides are exact: s + r + n ≤ max
    let tw_bt = Tw::new(Bt, f.max_arity);
    let twtw = Tw::new(Tw::new(Bt, f.max_arity), f.max_arity);
    let c = crate::conv::morphism_from_mc(&tw_g, &g.d, &alpha_ger(&tw_g, f.max_arity), f.max_arity)?;
    let mut coalgebra_morphism = true;
    for n in 2..=f.max_arity {
        for w in g.d_basis(n).iter() {
            let window = |e: &Elem<TB<Tw<Bt>>>| {
                let mut e = e.clone();
                e.retain(|(s, (r, _))| s + r + n <= f.max_arity);
                e
            };
            let lhs = coproduct(&twtw, &generic.image(w));
            let rhs = tw_of_morphism(&tw_bt, twtw.cap, &generic, &c.image(w));
            coalgebra_morphism &= window(&lhs) == window(&rhs);
        }
    }
    let alpha = eta_part(f).to_conv(g);
    let forbidden = forbidden_monomial_check(&alpha)?;
    let rep = FPrimeReport {
        max_arity: f.max_arity,
        input_mc,
        input_f_tcc,
        output_mc,
        image_in_br,
        eta_preserved,
        coalgebra_morphism,
        forbidden,
    };
    Ok((rep, fp))
}

/// T′∘ᵢT on single trees, re-exported for the coinvariant tests.
pub fn compose(tp: &BraceTree, i: usize, t: &BraceTree) -> Elem<BraceTree> {
    insert(tp, i, t).unwrap_or_default()
}
