//! Batch checks shared by the CLI and the acceptance run. Every entry point
//! returns a serializable report; randomized parts take an explicit seed, so
//! identical calls give identical reports.

use crate::algebra::{
    algebra_axiom_defects, atw, pull_back_cobar, structure_defects, test_ger_algebra, untwist, PullBack, Twisted, Vector,
};
use crate::brace::{act, insert, insert_elem, phi2, BraceTree, Br, Bt, TwBt};
use crate::classical::{ger_basis, lambda_as, As, Ger, GerMono, LaLie};
use crate::cobar::{as_inf, ger_inf, lalie_inf, Cobar};
use crate::complexes::{operad_slice, tw_slice};
use crate::conv::{from_generators, mc_residual, morphism_from_mc, u_ger, Conv};
use crate::exactalg::{all_perms, koszul_odd_order, q, sign, Perm};
use crate::gerbr::{run_pipeline, FPrimeReport, GerToTwBt};
use crate::hochschild::{
    brace_act, brace_act_elem, generic_twbt_act, gerstenhaber, hochschild_complex, mc_residual as hoch_mc, random_cochain,
    twbt_act, Cochain, FiniteAlgebraData, HochschildAlgebra,
};
use crate::homology::{quasi_iso_check, ChainComplexSlice, QuasiIsoReport};
use crate::operad::{check_operad_axioms, AxiomReport, Elem, Operad};
use crate::twisting::{
    alpha_as, alpha_ger, alpha_lalie, coalgebra_defects, coproduct, eta_outer, tw_eta, Tw, TB,
};
use crate::Error;
use num::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::BTreeMap;
use std::hash::Hash;

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

pub fn check(name: &str, r: Result<bool, Error>) -> Check {
    match r {
        Ok(passed) => Check { name: name.to_string(), passed, detail: String::new() },
        Err(e) => Check { name: name.to_string(), passed: false, detail: e.to_string() },
    }
}

fn unknown(kind: &str, s: &str) -> Error {
    Error::Precondition(format!("unknown {kind} '{s}'"))
}

// ---------------------------------------------------------------- axioms

/// `operad` is one of ger, lalie, as, lambda-as, bt, br, twbt, lalieinf,
/// gerinf, asinf, or tw:<one of the others except br/twbt>.
pub fn axioms(operad: &str, max_arity: usize, neutral_cap: usize, samples: usize, seed: u64) -> Result<AxiomReport, Error> {
    macro_rules! run {
        ($op:expr) => {
            Ok(check_operad_axioms(&$op, max_arity, samples, seed))
        };
    }
    let r = neutral_cap;
    match operad {
        "ger" => run!(Ger),
        "lalie" => run!(LaLie),
        "as" => run!(As),
        "lambda-as" => run!(lambda_as()),
        "bt" => run!(Bt),
        "br" => run!(Br),
        "twbt" => run!(TwBt { cap: r }),
        "lalieinf" => run!(lalie_inf()),
        "gerinf" => run!(ger_inf()),
        "asinf" => run!(as_inf()),
        "tw:ger" => run!(Tw::new(Ger, r)),
        "tw:lalie" => run!(Tw::new(LaLie, r)),
        "tw:as" => run!(Tw::new(As, r)),
        "tw:lambda-as" => run!(Tw::new(lambda_as(), r)),
        "tw:bt" => run!(Tw::new(Bt, r)),
        "tw:lalieinf" => run!(Tw::new(lalie_inf(), r)),
        "tw:gerinf" => run!(Tw::new(ger_inf(), r)),
        "tw:asinf" => run!(Tw::new(as_inf(), r).with_slot_degree(0)),
        _ => Err(unknown("operad", operad)),
    }
}

// ---------------------------------------------------------------- MC

#[derive(Clone, Debug, Serialize)]
pub struct McReport {
    pub which: String,
    pub max_arity: usize,
    pub neutral_cap: Option<usize>,
    pub residual_terms: usize,
    /// Extra conditions that pin the element (ΛLie∞ compatibility for U_Ger).
    pub pinned: bool,
    pub passed: bool,
}

fn conv_terms<P: Operad, D: Operad>(x: &Conv<P, D>, max: usize) -> usize {
    (0..=max + 1).map(|n| x.component(n).len()).sum()
}

/// `which` is one of ulalie, uger, alpha-T, alpha-G, asinf-c, bt-jacobi.
pub fn mc_check(which: &str, max_arity: usize, neutral_cap: usize) -> Result<McReport, Error> {
    let n = max_arity;
    let (residual_terms, pinned, cap) = match which {
        "ulalie" => {
            let l = lalie_inf();
            let x: Conv<LaLie, _> = from_generators(&l, n, |w| if *w == 2 { LaLie.phi(2) } else { Elem::zero() });
            (conv_terms(&mc_residual(&LaLie, &l.d, &x, true, n)?, n), true, None)
        }
        "uger" => {
            let g = ger_inf();
            let u = u_ger(n);
            let res = mc_residual(&Ger, &g.d, &u.to_conv(&g), true, n)?;
            let pinned = (2..=n).all(|k| u.eval_elem(&Ger, &g.phi(k)) == Ger.phi(k));
            (conv_terms(&res, n), pinned, None)
        }
        "alpha-T" => {
            let tw = Tw::new(lalie_inf(), neutral_cap);
            let x = alpha_lalie(&tw, n);
            (conv_terms(&mc_residual(&tw, &tw.base.d, &x, true, n)?, n), true, Some(neutral_cap))
        }
        "alpha-G" => {
            let tw = Tw::new(ger_inf(), neutral_cap);
            let x = alpha_ger(&tw, n);
            (conv_terms(&mc_residual(&tw, &tw.base.d, &x, true, n)?, n), true, Some(neutral_cap))
        }
        "asinf-c" => {
            let tw = Tw::new(as_inf(), neutral_cap).with_slot_degree(0);
            let x = alpha_as(&tw, n);
            (conv_terms(&mc_residual(&tw, &tw.base.d, &x, true, n)?, n), true, Some(neutral_cap))
        }
        "bt-jacobi" => {
            // φ₂∘₁φ₂ summed over cyclic permutations
            let p = phi2();
            let c = insert_elem(&p, 1, &p);
            let mut jac = Elem::zero();
            for s in [Perm::identity(3), Perm::from_images(&[2, 3, 1]), Perm::from_images(&[3, 1, 2])] {
                jac.add_assign(&c.map_basis(|t| (act(&s, t), Q::one())));
            }
            (jac.len(), !c.is_zero(), None)
        }
        _ => return Err(unknown("MC element", which)),
    };
    Ok(McReport {
        which: which.to_string(),
        max_arity,
        neutral_cap: cap,
        residual_terms,
        pinned,
        passed: residual_terms == 0 && pinned,
    })
}

use crate::Q;

// ---------------------------------------------------------------- coalgebras

#[derive(Clone, Debug, Serialize)]
pub struct CoalgebraReport {
    pub operad: String,
    pub max_arity: usize,
    pub neutral_cap: usize,
    pub seed: u64,
    /// Basis elements checked exhaustively (arity ≤ 2).
    pub exhaustive: usize,
    /// Random combinations checked at arities ≥ 3.
    pub sampled: usize,
    pub defects: Vec<(String, String)>,
    pub passed: bool,
}

fn random_combination<B: Ord + Clone>(basis: &[Elem<B>], rng: &mut ChaCha8Rng) -> Elem<B> {
    let mut out = Elem::zero();
    for _ in 0..3 {
        if basis.is_empty() {
            break;
        }
        out.add_scaled(&basis[rng.gen_range(0..basis.len())], &q(rng.gen_range(1..5) * if rng.gen_bool(0.5) { 1 } else { -1 }));
    }
    out
}

/// Exhaustive spanning elements up to arity 2, then `samples` random
/// combinations per higher arity.
fn elements<B: Ord + Clone>(
    basis: impl Fn(usize) -> Vec<Elem<B>>,
    max_arity: usize,
    samples: usize,
    rng: &mut ChaCha8Rng,
) -> (Vec<Elem<B>>, usize, usize) {
    let mut out = Vec::new();
    for n in 1..=max_arity.min(2) {
        out.extend(basis(n));
    }
    let exhaustive = out.len();
    for n in 3..=max_arity {
        let b = basis(n);
        for _ in 0..samples {
            let x = random_combination(&b, rng);
            if !x.is_zero() {
                out.push(x);
            }
        }
    }
    let sampled = out.len() - exhaustive;
    (out, exhaustive, sampled)
}

/// Counit laws, coassociativity, 𝔇 as a chain map and 𝔇 multiplicative, on
/// elements of TwO. Everything is compared with s + t + r ≤ R, where both
/// sides are exact.
fn comonad_defects<O: Operad>(mk: &dyn Fn() -> O, cap: usize, elems: &[Elem<TB<O>>]) -> Vec<(String, String)> {
    let tw = Tw::new(mk(), cap);
    let twtw = Tw::new(Tw::new(mk(), cap), cap);
    let tw3 = Tw::new(Tw::new(Tw::new(mk(), cap), cap), cap);
    let win2 = |e: &Elem<TB<Tw<O>>>| {
        let mut e = e.clone();
        e.retain(|(s, (r, _))| s + r <= cap);
        e
    };
    let win3 = |e: &Elem<TB<Tw<Tw<O>>>>| {
        let mut e = e.clone();
        e.retain(|(s, (t, (r, _)))| s + t + r <= cap);
        e
    };
    let mut out = Vec::new();
    let mut bad = |law: &str, f: &Elem<TB<O>>| out.push((law.to_string(), format!("{:?}", f)));
    for (k, f) in elems.iter().enumerate() {
        let df = coproduct(&twtw, f);
        if eta_outer(&twtw, &df) != *f {
            bad("counit (outer)", f);
        }
        if tw_eta::<O>(&df) != *f {
            bad("counit (inner)", f);
        }
        let a = coproduct(&tw3, &df);
        let b = twtw.map(&tw3, &df, |x| coproduct(&twtw, &Elem::basis(x.clone())));
        if win3(&a) != win3(&b) {
            bad("coassociativity", f);
        }
        if win2(&twtw.diff_elem(&df)) != win2(&coproduct(&twtw, &tw.diff_elem(f))) {
            bad("coproduct is a chain map", f);
        }
        // pair with the next element for ∘₁
        let g = &elems[(k + 1) % elems.len()];
        let fg = tw.compose_elem(f, 1, g);
        if win2(&coproduct(&twtw, &fg)) != win2(&twtw.compose_elem(&df, 1, &coproduct(&twtw, g))) {
            bad("coproduct is multiplicative", f);
        }
    }
    out
}

fn emb_report<O: Operad>(
    name: &str,
    mk: &dyn Fn() -> O,
    max_arity: usize,
    cap: usize,
    samples: usize,
    seed: u64,
) -> CoalgebraReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tw = Tw::new(mk(), cap);
    let twtw = Tw::new(Tw::new(mk(), cap), cap);
    let base = mk();
    let (elems, exhaustive, sampled) = elements(|n| base.basis_elems(n).unwrap_or_default(), max_arity, samples, &mut rng);
    let c = |b: &O::B| tw.embed(&Elem::basis(b.clone()));
    let mut defects = coalgebra_defects(&tw, &twtw, &c, &elems, max_arity);
    for x in &elems {
        if !tw.diff_elem(&tw.embed(x)).minus(&tw.embed(&base.diff_elem(x))).is_zero() {
            defects.push(("chain map".into(), format!("{:?}", x)));
        }
    }
    let (tw_elems, _, _) = elements(|n| tw.basis_elems(n).unwrap_or_default(), max_arity, samples, &mut rng);
    defects.extend(comonad_defects(mk, cap, &tw_elems));
    CoalgebraReport {
        operad: name.to_string(),
        max_arity,
        neutral_cap: cap,
        seed,
        exhaustive,
        sampled,
        passed: defects.is_empty(),
        defects,
    }
}

fn cobar_report<D: Operad>(
    name: &str,
    mk: &dyn Fn() -> Cobar<D>,
    alpha: &dyn Fn(&Tw<Cobar<D>>, usize) -> Conv<Tw<Cobar<D>>, D>,
    slot_deg: i64,
    max_arity: usize,
    cap: usize,
    samples: usize,
    seed: u64,
) -> Result<CoalgebraReport, Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tw = Tw::new(mk(), cap).with_slot_degree(slot_deg);
    let twtw = Tw::new(Tw::new(mk(), cap).with_slot_degree(slot_deg), cap).with_slot_degree(slot_deg);
    // Tw(c) on arity n needs c up to arity n + R
    let top = max_arity + cap;
    let c = morphism_from_mc(&tw, &tw.base.d, &alpha(&tw, top), top)?;
    let (elems, exhaustive, sampled) = elements(|n| tw.base.basis_elems(n).unwrap_or_default(), max_arity, samples, &mut rng);
    let mut defects = coalgebra_defects(&tw, &twtw, &|t| c.eval(&tw, t), &elems, max_arity);
    for x in &elems {
        let lhs = tw.diff_elem(&c.eval_elem(&tw, x));
        let rhs = c.eval_elem(&tw, &tw.base.diff_elem(x));
        let mut d = lhs.minus(&rhs);
        d.retain(|(r, b)| r + tw.base.arity(b) <= top);
        if !d.is_zero() {
            defects.push(("chain map".into(), format!("{:?}", x)));
        }
    }
    let (tw_elems, _, _) = elements(|n| tw.basis_elems(n).unwrap_or_default(), max_arity.min(2), samples, &mut rng);
    defects.extend(comonad_defects(&|| Tw::new(mk(), cap).with_slot_degree(slot_deg).base, cap, &tw_elems));
    Ok(CoalgebraReport {
        operad: name.to_string(),
        max_arity,
        neutral_cap: cap,
        seed,
        exhaustive,
        sampled,
        passed: defects.is_empty(),
        defects,
    })
}

/// Coalgebra axioms for c: O → TwO and the comonad laws on TwO. `operad` is
/// ger, lalie or lambda-as (c = emb), gerinf (α_𝔊), lalieinf (𝔗) or asinf.
pub fn coalgebra(operad: &str, max_arity: usize, neutral_cap: usize, samples: usize, seed: u64) -> Result<CoalgebraReport, Error> {
    let (n, r) = (max_arity, neutral_cap);
    match operad {
        "ger" => Ok(emb_report(operad, &|| Ger, n, r, samples, seed)),
        "lalie" => Ok(emb_report(operad, &|| LaLie, n, r, samples, seed)),
        "lambda-as" | "as" => Ok(emb_report("lambda-as", &lambda_as, n, r, samples, seed)),
        "gerinf" => cobar_report(operad, &ger_inf, &|tw, m| alpha_ger(tw, m), 2, n, r, samples, seed),
        "lalieinf" => cobar_report(operad, &lalie_inf, &|tw, m| alpha_lalie(tw, m), 2, n, r, samples, seed),
        "asinf" => cobar_report(operad, &as_inf, &|tw, m| alpha_as(tw, m), 0, n, r, samples, seed),
        _ => Err(unknown("coalgebra", operad)),
    }
}

// ---------------------------------------------------------------- cohomology

#[derive(Clone, Debug, Serialize)]
pub struct CohomologyReport {
    pub complex: String,
    pub arity: usize,
    pub deg_min: i64,
    pub deg_max: i64,
    pub neutral_cap: Option<usize>,
    pub dims: BTreeMap<i64, usize>,
    /// dim H^k for d_min < k < d_max; the window edges are cut.
    pub cohomology: BTreeMap<i64, usize>,
    /// Br → TwBT for br, η for tw:*.
    pub comparison: Option<QuasiIsoReport>,
}

fn report<B: Ord + Clone + Hash>(
    complex: &str,
    arity: usize,
    cap: Option<usize>,
    s: &ChainComplexSlice<B>,
    comparison: Option<QuasiIsoReport>,
) -> CohomologyReport {
    CohomologyReport {
        complex: complex.to_string(),
        arity,
        deg_min: s.d_min,
        deg_max: s.d_max,
        neutral_cap: cap,
        dims: (s.d_min..=s.d_max).map(|k| (k, s.dim(k))).collect(),
        cohomology: s.cohomology_dims(),
        comparison,
    }
}

fn tw_report<O: Operad>(complex: &str, op: O, mk: O, n: usize, lo: i64, hi: i64, cap: usize) -> Result<CohomologyReport, Error> {
    let tw = Tw::new(mk, cap);
    let src = tw_slice(&tw, n, lo, hi)?;
    let tgt = operad_slice(&op, n, lo, hi)?;
    let cmp = quasi_iso_check(&src, &tgt, |x| tw.eta(x));
    Ok(report(complex, n, Some(cap), &src, Some(cmp)))
}

/// `complex` is br, twbt, ger, lalie, lambda-as, tw:ger, tw:lalie or
/// tw:lambda-as; the neutral cap applies to twbt and tw:*.
pub fn cohomology(complex: &str, n: usize, lo: i64, hi: i64, cap: usize) -> Result<CohomologyReport, Error> {
    match complex {
        "br" => {
            let src = crate::complexes::br_slice(n, lo, hi)?;
            let tgt = crate::complexes::twbt_slice(n, lo, hi)?;
            let cmp = quasi_iso_check(&src, &tgt, |x| x.clone());
            Ok(report(complex, n, None, &src, Some(cmp)))
        }
        "twbt" => Ok(report(complex, n, Some(cap), &crate::complexes::twbt_slice(n, lo, hi)?, None)),
        "ger" => Ok(report(complex, n, None, &operad_slice(&Ger, n, lo, hi)?, None)),
        "lalie" => Ok(report(complex, n, None, &operad_slice(&LaLie, n, lo, hi)?, None)),
        "lambda-as" => Ok(report(complex, n, None, &operad_slice(&lambda_as(), n, lo, hi)?, None)),
        "tw:ger" => tw_report(complex, Ger, Ger, n, lo, hi, cap),
        "tw:lalie" => tw_report(complex, LaLie, LaLie, n, lo, hi, cap),
        "tw:lambda-as" => tw_report(complex, lambda_as(), lambda_as(), n, lo, hi, cap),
        _ => Err(unknown("complex", complex)),
    }
}

// ---------------------------------------------------------------- algebras

/// Twisting at the level of algebras on the 4-dimensional test Ger-algebra:
/// zero twist, additivity of twists, untwisting, and the square relating
/// ATw with pulling back along Ψ (Ψ = id and Ψ = U_Ger).
pub fn algebra_properties() -> Vec<Check> {
    let (a, _) = test_ger_algebra();
    let tw = Tw::new(Ger, 3);
    let ops: Vec<Elem<GerMono>> = (1..=3).flat_map(ger_basis).map(Elem::basis).collect();
    let emb = |b: &GerMono| Elem::basis((0usize, b.clone()));
    let mut out = Vec::new();

    out.push(check("test algebra is a Ger-algebra", {
        let by_arity: BTreeMap<usize, Vec<Elem<GerMono>>> =
            (1..=3).map(|n| (n, ger_basis(n).into_iter().map(Elem::basis).collect())).collect();
        Ok(algebra_axiom_defects(&a, &by_arity).is_empty())
    }));

    out.push(check(
        "zero twist is the identity",
        Twisted::new(&a, &tw, Vector::zero()).map(|t0| structure_defects(&a, &atw(&t0, emb), &ops).is_empty()),
    ));

    out.push(check("twists add", (|| {
        let alpha = Vector::basis(0);
        let alpha2 = Vector::basis(1).minus(&Vector::basis(0));
        let t1 = Twisted::new(&a, &tw, alpha.clone())?;
        let v1 = atw(&t1, emb);
        let tw2 = Tw::new(Ger, 3);
        let t2 = Twisted::new(&v1, &tw2, alpha2.clone())?;
        let twice = atw(&t2, emb);
        let t12 = Twisted::new(&a, &tw, alpha.plus(&alpha2))?;
        let once = atw(&t12, emb);
        // equal, and the twist is not trivial
        Ok(structure_defects(&twice, &once, &ops).is_empty() && !structure_defects(&a, &once, &ops).is_empty())
    })()));

    out.push(check("untwist inverts twist", (|| {
        let mut ok = true;
        for alpha in [Vector::zero(), Vector::basis(0), Vector::basis(1).scale(&q(3))] {
            let t = Twisted::new(&a, &tw, alpha.clone())?;
            let u = untwist(&t);
            ok &= u.alpha == alpha && structure_defects(&a, &u, &ops).is_empty();
        }
        Ok(ok)
    })()));

    out.push(check("square commutes for the identity", (|| {
        let alpha = Vector::basis(0);
        let tw = Tw::new(Ger, 2);
        let t = Twisted::new(&a, &tw, alpha.clone())?;
        let twisted = atw(&t, emb);
        let pulled = PullBack { inner: &a, source: &Ger, map: Box::new(|b: &GerMono| Elem::basis(b.clone())) };
        let t_id = Twisted::new(&pulled, &tw, alpha)?;
        let ok = structure_defects(&atw(&t_id, emb), &twisted, &ops).is_empty();
        Ok(ok)
    })()));

    out.push(check("square commutes for U_Ger", (|| {
        let alpha = Vector::basis(0);
        let tw = Tw::new(Ger, 2);
        let t = Twisted::new(&a, &tw, alpha.clone())?;
        let twisted = atw(&t, emb);
        let tw_g = Tw::new(ger_inf(), 2);
        let u = u_ger(6);
        let pulled = pull_back_cobar(&a, &tw_g.base, &u);
        let c = morphism_from_mc(&tw_g, &tw_g.base.d, &alpha_ger(&tw_g, 5), 5)?;
        let t_g = Twisted::new(&pulled, &tw_g, alpha)?;
        let lhs = atw(&t_g, |x| c.eval(&tw_g, x));
        let rhs = pull_back_cobar(&twisted, &tw_g.base, &u);
        let gens: Vec<_> = (1..=3).flat_map(|n| tw_g.base.basis(n).unwrap_or_default()).map(Elem::basis).collect();
        Ok(structure_defects(&lhs, &rhs, &gens).is_empty())
    })()));

    out.push(check(
        "non-MC element is refused",
        Ok(Twisted::new(&a, &tw, Vector::basis(0).plus(&Vector::basis(1))).is_err()),
    ));
    out
}

// ---------------------------------------------------------------- Hochschild

#[derive(Clone, Debug, Serialize)]
pub struct HochschildReport {
    pub suite: String,
    pub m_cap: usize,
    pub seed: u64,
    pub samples: usize,
    pub checks: Vec<Check>,
    /// Cohomology of the complex on degrees whose cochains all have m < m_cap.
    pub cohomology: Option<BTreeMap<i64, usize>>,
    pub passed: bool,
}

/// A random nonzero homogeneous cochain with m inputs, if one exists.
fn random_homogeneous(a: &FiniteAlgebraData, m: usize, rng: &mut ChaCha8Rng) -> Option<(i64, Cochain)> {
    let mut degs: Vec<i64> = crate::hochschild::tuples(a.dim(), m)
        .into_iter()
        .flat_map(|ins| (0..a.dim()).map(move |o| (ins.clone(), o)))
        .map(|k| a.key_degree(&k))
        .collect();
    degs.sort();
    degs.dedup();
    if degs.is_empty() {
        return None;
    }
    let d = degs[rng.gen_range(0..degs.len())];
    Some((d, random_cochain(a, m, d, rng)))
}

/// Degrees k where the truncated complex is the full one near k: every key
/// that is missing, or whose differential was cut, has degree > k. Keys with
/// m inputs have degree ≥ m(1 − max|a|) + min|a|, so this needs max|a| ≤ 0;
/// otherwise every fixed degree is infinite-dimensional and None is returned.
fn honest_cohomology(a: &FiniteAlgebraData, m_cap: usize, c: &ChainComplexSlice<crate::hochschild::Key>) -> Option<BTreeMap<i64, usize>> {
    let (lo, hi) = (*a.degrees.iter().min()?, *a.degrees.iter().max()?);
    if hi > 0 {
        return None;
    }
    let k_top = a.m.keys().copied().max().unwrap_or(2) as i64;
    let m0 = m_cap as i64 - k_top + 2;
    let bound = m0 * (1 - hi) + lo;
    Some(c.cohomology_dims().into_iter().filter(|(k, _)| *k < bound).collect())
}

/// `suite` is d2 (MC equation, d² = 0 and cohomology), bracket (graded
/// symmetry and Jacobi for the Gerstenhaber bracket) or braces (the BT action
/// is operadic and equivariant; twisted trees act as neutral decorations).
pub fn hochschild(a: &FiniteAlgebraData, m_cap: usize, suite: &str, samples: usize, seed: u64) -> Result<HochschildReport, Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = Vec::new();
    let mut cohomology = None;
    match suite {
        "d2" => {
            let res = hoch_mc(a, 2 * a.m.keys().copied().max().unwrap_or(2).max(m_cap));
            checks.push(check("structure is Maurer-Cartan", Ok(res.is_zero())));
            if res.is_zero() {
                let c = hochschild_complex(a, m_cap);
                checks.push(check("d² = 0", c.as_ref().map(|_| true).map_err(|e| Error::Precondition(e.to_string()))));
                if let Ok(c) = c {
                    cohomology = honest_cohomology(a, m_cap, &c);
                }
            }
        }
        "bracket" => {
            let mut sym = true;
            let mut jac = true;
            for _ in 0..samples {
                let ms = [rng.gen_range(0..3), rng.gen_range(0..3), rng.gen_range(0..2)];
                let xs: Vec<_> = ms.iter().filter_map(|&m| random_homogeneous(a, m, &mut rng)).collect();
                if xs.len() < 3 {
                    continue;
                }
                let ((g1, x), (g2, y), (g3, z)) = (&xs[0], &xs[1], &xs[2]);
                let b = |p: &Cochain, q: &Cochain| gerstenhaber(a, p, q);
                sym &= b(x, y)? == b(y, x)?.scale(&sign(g1 * g2 % 2 != 0));
                let mut j = b(&b(x, y)?, z)?;
                j.add_scaled(&b(&b(z, x)?, y)?, &sign(g3 * (g1 + g2) % 2 != 0));
                j.add_scaled(&b(&b(y, z)?, x)?, &sign(g1 * (g2 + g3) % 2 != 0));
                jac &= j.is_zero();
            }
            checks.push(check("graded symmetry", Ok(sym)));
            checks.push(check("Jacobi identity", Ok(jac)));
        }
        "braces" => {
            let small: Vec<BraceTree> = (1..=2).flat_map(|n| crate::brace::enumerate(n, 0)).collect();
            let outer: Vec<BraceTree> = (1..=3).flat_map(|n| crate::brace::enumerate(n, 0)).collect();
            let mut operadic = true;
            for _ in 0..samples {
                let tp = &outer[rng.gen_range(0..outer.len())];
                let t = &small[rng.gen_range(0..small.len())];
                let i = rng.gen_range(1..=tp.arity());
                let n = tp.arity() + t.arity() - 1;
                let ps: Vec<(i64, Cochain)> =
                    (0..n).filter_map(|_| random_homogeneous(a, rng.gen_range(0..3), &mut rng)).collect();
                if ps.len() < n {
                    continue;
                }
                let all: Vec<Cochain> = ps.iter().map(|p| p.1.clone()).collect();
                let lhs = brace_act_elem(a, &insert(tp, i, t)?, &all)?;
                let inner = brace_act(a, t, &all[i - 1..i - 1 + t.arity()])?;
                let mut args: Vec<Cochain> = all[..i - 1].to_vec();
                args.push(inner);
                args.extend_from_slice(&all[i - 1 + t.arity()..]);
                let s: i64 = ps[..i - 1].iter().map(|p| p.0).sum::<i64>() * Bt.degree(t);
                operadic &= lhs == brace_act(a, tp, &args)?.scale(&sign(s % 2 != 0));
            }
            checks.push(check("action is operadic", Ok(operadic)));

            let mut equivariant = true;
            for t in crate::brace::enumerate(3, 0).iter().step_by(3) {
                let ps: Vec<(i64, Cochain)> = (0..3).filter_map(|_| random_homogeneous(a, rng.gen_range(0..3), &mut rng)).collect();
                if ps.len() < 3 {
                    continue;
                }
                let all: Vec<Cochain> = ps.iter().map(|p| p.1.clone()).collect();
                let degs: Vec<i64> = ps.iter().map(|p| p.0).collect();
                for s in all_perms(3) {
                    let order: Vec<usize> = (1..=3).map(|j| s.apply(j) - 1).collect();
                    let permuted: Vec<Cochain> = order.iter().map(|&k| all[k].clone()).collect();
                    equivariant &= brace_act(a, &act(&s, t), &all)?
                        == brace_act(a, t, &permuted)?.scale(&sign(koszul_odd_order(&degs, &order)));
                }
            }
            checks.push(check("action is equivariant", Ok(equivariant)));

            if hoch_mc(a, 2 * m_cap).is_zero() {
                let h = HochschildAlgebra::new(a.clone(), m_cap);
                let tw = Tw::new(Bt, 2);
                let mut agree = true;
                for n in 1..=2 {
                    for r in 0..=1 {
                        for t in crate::brace::enumerate(n, r) {
                            let ps: Vec<Cochain> =
                                (0..n).filter_map(|_| random_homogeneous(a, rng.gen_range(0..2), &mut rng)).map(|p| p.1).collect();
                            if ps.len() < n {
                                continue;
                            }
                            let mut direct = twbt_act(a, &a.alpha(), &t, &ps)?;
                            direct.retain(|(ins, _)| ins.len() <= m_cap);
                            agree &= generic_twbt_act(&h, &tw, &t, &ps)? == direct;
                        }
                    }
                }
                checks.push(check("neutral vertices act through the MC element", Ok(agree)));
            }
        }
        _ => return Err(unknown("suite", suite)),
    }
    let passed = checks.iter().all(|c| c.passed);
    Ok(HochschildReport { suite: suite.to_string(), m_cap, seed, samples, checks, cohomology, passed })
}

// ---------------------------------------------------------------- F′

/// The map restricted to generators of arity ≤ `max_arity`.
pub fn truncate_map(f: &GerToTwBt, max_arity: usize) -> Result<GerToTwBt, Error> {
    if max_arity > f.max_arity {
        return Err(Error::Precondition(format!("map is only known up to arity {}", f.max_arity)));
    }
    let images = f.images.iter().filter(|(w, _)| w.arity() <= max_arity).map(|(w, e)| (w.clone(), e.clone())).collect();
    Ok(GerToTwBt { max_arity, images })
}

pub fn fprime(f: &GerToTwBt, max_arity: usize) -> Result<FPrimeReport, Error> {
    Ok(run_pipeline(&truncate_map(f, max_arity)?)?.0)
}
