//! Cotorsion pairs in an extension-closed carrier: orthogonality,
//! approximation conflations, exhaustive enumeration, gluing along a
//! recollement and restriction back to the outer categories.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactlin::{space_size, Mat};
use crate::exstruct::{check_extension_closed, functor_exactness, ExCat, Mode, Subcat};
use crate::morphcat::FunctorTag::{self, *};
use crate::recollement::{Item, RecollementScenario};
use crate::repcat::{Conflation, Rep, RepMap};
use crate::verdict::{Status, Verdict, Witness};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Pair {
    pub t: Subcat,
    pub f: Subcat,
}

/// `b`: a conflation `F -> T -> C`; `c`: a conflation `C -> F -> T`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    B,
    C,
}

impl Direction {
    pub fn parse(s: &str) -> Result<Direction> {
        match s {
            "b" => Ok(Direction::B),
            "c" => Ok(Direction::C),
            other => Err(Error::UnknownName(format!("direction {other}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    /// `C` already lies in the relevant class.
    Trivial,
    /// The evaluation map from (or into) the canonical sum.
    Canonical,
    /// A summand of the canonical sum with some map.
    Summand,
    /// Multiplicity- and dimension-bounded search.
    Search,
}

impl Stage {
    pub fn name(self) -> &'static str {
        match self {
            Stage::Trivial => "trivial",
            Stage::Canonical => "canonical",
            Stage::Summand => "summand",
            Stage::Search => "search",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Approximation {
    pub direction: Direction,
    pub conf: Conflation,
    pub stage: Stage,
}

#[derive(Clone, Debug)]
pub enum Outcome {
    Found(Approximation),
    /// `exact` is false when the answer only holds within the search bounds.
    No { exact: bool, reason: String },
    Unknown(String),
}

pub fn render(x: &ExCat, sub: &Subcat) -> String {
    if sub.is_empty() {
        return "0".into();
    }
    let names: Vec<&str> = sub.iter().map(|i| x.label(i)).collect();
    format!("add({})", names.join(", "))
}

/// `Ext¹(T, F) = 0`, by generators.
pub fn ext_orthogonal(x: &ExCat, t: &Subcat, f: &Subcat) -> Verdict {
    let ext = x.cat.ext_table();
    for a in t.iter() {
        for b in f.iter() {
            if ext[a][b] > 0 {
                let space = x.cat.ext_space_of(a, b);
                let mut cls = vec![0; space.dim()];
                cls[0] = 1;
                let conf = x.algebra().ext_to_conflation(&space, &cls);
                let w = Witness::new(format!(
                    "Ext¹({}, {}) has dimension {}; a nonsplit extension is {} -> {} -> {}",
                    x.label(a),
                    x.label(b),
                    ext[a][b],
                    x.label(b),
                    x.describe(conf.middle()),
                    x.label(a)
                ))
                .with_object("T", x.cat.object(a))
                .with_object("F", x.cat.object(b))
                .with_object("E", conf.middle())
                .with_map("inflation", &conf.incl)
                .with_map("deflation", &conf.proj);
                return Verdict::fails(w);
            }
        }
    }
    Verdict::holds()
}

/// Carrier indecomposables `M` with `Ext¹(X, M) = 0` for all `X ∈ sub`.
pub fn right_perp(x: &ExCat, sub: &Subcat) -> Subcat {
    let ext = x.cat.ext_table();
    Subcat::of(x.carrier.iter().filter(|&m| sub.iter().all(|s| ext[s][m] == 0)))
}

/// Carrier indecomposables `M` with `Ext¹(M, X) = 0` for all `X ∈ sub`.
pub fn left_perp(x: &ExCat, sub: &Subcat) -> Subcat {
    let ext = x.cat.ext_table();
    Subcat::of(x.carrier.iter().filter(|&m| sub.iter().all(|s| ext[m][s] == 0)))
}

/// All count vectors `v` with `v[i] <= maxes[i]`, ordered by total weight and
/// then lexicographically.
fn count_vectors(maxes: &[usize], weights: &[usize], limit: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &m in maxes {
        let mut next = Vec::new();
        for v in &out {
            for c in 0..=m {
                let mut w = v.clone();
                w.push(c);
                next.push(w);
            }
        }
        out = next;
    }
    let weight = |v: &Vec<usize>| v.iter().zip(weights).map(|(c, w)| c * w).sum::<usize>();
    out.retain(|v| weight(v) <= limit);
    out.sort_by(|a, b| weight(a).cmp(&weight(b)).then_with(|| a.cmp(b)));
    out
}

struct Search<'a> {
    x: &'a ExCat,
    budget: u64,
    capped: bool,
}

impl Search<'_> {
    fn sum_of(&self, idx: &[usize], counts: &[usize]) -> Rep {
        let parts: Vec<Rep> = idx
            .iter()
            .zip(counts)
            .flat_map(|(&i, &c)| std::iter::repeat_n(self.x.cat.object(i).clone(), c))
            .collect();
        self.x.algebra().direct_sum(&parts).rep
    }

    /// Tries every map `src -> dst` and returns the first accepted by `ok`.
    fn try_maps(&mut self, src: &Rep, dst: &Rep, ok: &dyn Fn(&RepMap) -> Result<bool>) -> Result<Option<RepMap>> {
        let hom = self.x.algebra().hom_space(src, dst);
        let size = space_size(self.x.p(), hom.dim());
        if size > self.budget as u128 {
            self.capped = true;
            return Ok(None);
        }
        self.budget -= size as u64;
        for m in hom.elements() {
            if ok(&m)? {
                return Ok(Some(m));
            }
        }
        Ok(None)
    }
}

fn zero_rep(x: &ExCat) -> Rep {
    x.algebra().zero_rep()
}

/// A conflation `F -> T -> C` with `T ∈ t`, `F ∈ f`.
pub fn right_approximation(x: &ExCat, c: &Rep, t: &Subcat, f: &Subcat) -> Result<Outcome> {
    let alg = x.algebra();
    let p = x.p();
    if x.member_of(t, c)? {
        let z = zero_rep(x);
        let conf = Conflation {
            incl: RepMap::zero(p, &z, c),
            proj: RepMap::identity(p, c),
        };
        return Ok(Outcome::Found(Approximation {
            direction: Direction::B,
            conf,
            stage: Stage::Trivial,
        }));
    }
    let accept = |m: &RepMap| -> Result<Option<Conflation>> {
        if !m.is_surjective() {
            return Ok(None);
        }
        let k = alg.kernel(m);
        if !x.member_of(f, &k.rep)? {
            return Ok(None);
        }
        Ok(Some(Conflation {
            incl: k.incl,
            proj: m.clone(),
        }))
    };
    let t_idx: Vec<usize> = t.iter().collect();
    let mut maps = Vec::new();
    let mut counts = Vec::new();
    for &i in &t_idx {
        let basis = alg.hom_basis(x.cat.object(i), c);
        counts.push(basis.len());
        maps.extend(basis);
    }
    let (_, canon) = alg.copair(&maps, c);
    if !canon.is_surjective() {
        return Ok(Outcome::No {
            exact: true,
            reason: "no map from the class onto the object is surjective".into(),
        });
    }
    if let Some(conf) = accept(&canon)? {
        return Ok(found(Direction::B, conf, Stage::Canonical));
    }
    let ok = |m: &RepMap| Ok(accept(m)?.is_some());
    let orthogonal = ext_orthogonal(x, t, f).is_holds();
    let mut search = Search {
        x,
        budget: x.caps().tuples,
        capped: false,
    };
    let weights: Vec<usize> = t_idx.iter().map(|&i| x.cat.object(i).total_dim()).collect();
    for v in count_vectors(&counts, &weights, usize::MAX) {
        let src = search.sum_of(&t_idx, &v);
        if let Some(m) = search.try_maps(&src, c, &ok)? {
            return Ok(found(Direction::B, accept(&m)?.unwrap(), Stage::Summand));
        }
    }
    if orthogonal {
        return Ok(no_or_unknown(&search, true));
    }
    let useful: Vec<usize> = t_idx.iter().copied().filter(|&i| alg.hom_dim(x.cat.object(i), c) > 0).collect();
    let weights: Vec<usize> = useful.iter().map(|&i| x.cat.object(i).total_dim()).collect();
    let maxes = vec![x.caps().approx_multiplicity; useful.len()];
    for v in count_vectors(&maxes, &weights, c.total_dim() + x.caps().approx_extra_dim) {
        let src = search.sum_of(&useful, &v);
        if let Some(m) = search.try_maps(&src, c, &ok)? {
            return Ok(found(Direction::B, accept(&m)?.unwrap(), Stage::Search));
        }
    }
    Ok(no_or_unknown(&search, false))
}

/// A conflation `C -> F -> T` with `F ∈ f`, `T ∈ t`.
pub fn left_approximation(x: &ExCat, c: &Rep, t: &Subcat, f: &Subcat) -> Result<Outcome> {
    let alg = x.algebra();
    let p = x.p();
    if x.member_of(f, c)? {
        let z = zero_rep(x);
        let conf = Conflation {
            incl: RepMap::identity(p, c),
            proj: RepMap::zero(p, c, &z),
        };
        return Ok(found(Direction::C, conf, Stage::Trivial));
    }
    let accept = |m: &RepMap| -> Result<Option<Conflation>> {
        if !m.is_injective() {
            return Ok(None);
        }
        let q = alg.cokernel(m);
        if !x.member_of(t, &q.rep)? {
            return Ok(None);
        }
        Ok(Some(Conflation {
            incl: m.clone(),
            proj: q.proj,
        }))
    };
    let f_idx: Vec<usize> = f.iter().collect();
    let mut maps = Vec::new();
    let mut counts = Vec::new();
    for &i in &f_idx {
        let basis = alg.hom_basis(c, x.cat.object(i));
        counts.push(basis.len());
        maps.extend(basis);
    }
    let (_, canon) = alg.pair(&maps, c);
    if !canon.is_injective() {
        return Ok(Outcome::No {
            exact: true,
            reason: "no map from the object into the class is injective".into(),
        });
    }
    if let Some(conf) = accept(&canon)? {
        return Ok(found(Direction::C, conf, Stage::Canonical));
    }
    let ok = |m: &RepMap| Ok(accept(m)?.is_some());
    let orthogonal = ext_orthogonal(x, t, f).is_holds();
    let mut search = Search {
        x,
        budget: x.caps().tuples,
        capped: false,
    };
    let weights: Vec<usize> = f_idx.iter().map(|&i| x.cat.object(i).total_dim()).collect();
    for v in count_vectors(&counts, &weights, usize::MAX) {
        let dst = search.sum_of(&f_idx, &v);
        if let Some(m) = search.try_maps(c, &dst, &ok)? {
            return Ok(found(Direction::C, accept(&m)?.unwrap(), Stage::Summand));
        }
    }
    if orthogonal {
        return Ok(no_or_unknown(&search, true));
    }
    let useful: Vec<usize> = f_idx.iter().copied().filter(|&i| alg.hom_dim(c, x.cat.object(i)) > 0).collect();
    let weights: Vec<usize> = useful.iter().map(|&i| x.cat.object(i).total_dim()).collect();
    let maxes = vec![x.caps().approx_multiplicity; useful.len()];
    for v in count_vectors(&maxes, &weights, c.total_dim() + x.caps().approx_extra_dim) {
        let dst = search.sum_of(&useful, &v);
        if let Some(m) = search.try_maps(c, &dst, &ok)? {
            return Ok(found(Direction::C, accept(&m)?.unwrap(), Stage::Search));
        }
    }
    Ok(no_or_unknown(&search, false))
}

fn found(direction: Direction, conf: Conflation, stage: Stage) -> Outcome {
    Outcome::Found(Approximation { direction, conf, stage })
}

fn no_or_unknown(search: &Search, exact: bool) -> Outcome {
    if search.capped {
        return Outcome::Unknown("tuples: approximation search".into());
    }
    if exact {
        Outcome::No {
            exact: true,
            reason: "no summand of the canonical approximation works".into(),
        }
    } else {
        Outcome::No {
            exact: false,
            reason: "none within the multiplicity and dimension bounds".into(),
        }
    }
}

pub fn approximate(x: &ExCat, c: &Rep, pair: &Pair, direction: Direction) -> Result<Outcome> {
    match direction {
        Direction::B => right_approximation(x, c, &pair.t, &pair.f),
        Direction::C => left_approximation(x, c, &pair.t, &pair.f),
    }
}

/// Human rendering of an approximation conflation.
pub fn describe_conflation(x: &ExCat, conf: &Conflation) -> String {
    format!(
        "{} -> {} -> {}",
        x.describe(conf.left()),
        x.describe(conf.middle()),
        x.describe(conf.right())
    )
}

pub fn outcome_verdict(x: &ExCat, object: &str, outcome: &Outcome) -> Verdict {
    match outcome {
        Outcome::Found(a) => {
            let w = Witness::new(format!("{} ({})", describe_conflation(x, &a.conf), a.stage.name()))
                .with_object("left", a.conf.left())
                .with_object("middle", a.conf.middle())
                .with_object("right", a.conf.right())
                .with_map("inflation", &a.conf.incl)
                .with_map("deflation", &a.conf.proj);
            Verdict::holds_with(w)
        }
        Outcome::No { exact: true, reason } => Verdict::fails(Witness::new(format!("no approximation of {object}: {reason}"))),
        Outcome::No { exact: false, reason } => {
            let mut v = Verdict::unknown("approx_multiplicity/approx_extra_dim");
            v.witness = Some(Witness::new(format!("no approximation of {object} found: {reason}")));
            v
        }
        Outcome::Unknown(cap) => Verdict::unknown(cap.clone()),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApproxRecord {
    pub object: String,
    pub direction: Direction,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CotorsionReport {
    pub orthogonal: Verdict,
    pub right: Verdict,
    pub left: Verdict,
    pub records: Vec<ApproxRecord>,
}

impl CotorsionReport {
    pub fn overall(&self) -> Verdict {
        Verdict::all([self.orthogonal.clone(), self.right.clone(), self.left.clone()])
    }

    pub fn is_pair(&self) -> bool {
        self.orthogonal.is_holds() && self.right.is_holds() && self.left.is_holds()
    }
}

pub fn check_cotorsion_pair(x: &ExCat, pair: &Pair) -> Result<CotorsionReport> {
    if !pair.t.is_subset(&x.carrier) || !pair.f.is_subset(&x.carrier) {
        return Err(Error::Refused("the pair is not contained in the category".into()));
    }
    let orthogonal = ext_orthogonal(x, &pair.t, &pair.f);
    let mut records = Vec::new();
    let mut right = Vec::new();
    let mut left = Vec::new();
    for c in x.carrier.iter() {
        for dir in [Direction::B, Direction::C] {
            let v = match approximate(x, x.cat.object(c), pair, dir) {
                Ok(o) => outcome_verdict(x, x.label(c), &o),
                Err(e) => Verdict::from_error(&e),
            };
            match dir {
                Direction::B => right.push(v.clone()),
                Direction::C => left.push(v.clone()),
            }
            records.push(ApproxRecord {
                object: x.label(c).to_string(),
                direction: dir,
                verdict: v,
            });
        }
    }
    Ok(CotorsionReport {
        orthogonal,
        right: Verdict::all(right),
        left: Verdict::all(left),
        records,
    })
}

/// The closure properties every cotorsion pair must have.
pub fn coherence(x: &ExCat, pair: &Pair) -> Verdict {
    let proj: BTreeSet<usize> = x.projectives().into_iter().collect();
    let inj: BTreeSet<usize> = x.injectives().into_iter().collect();
    let bad = |msg: String| Verdict::inconsistent(Witness::new(msg));
    if left_perp(x, &pair.f).indecs != pair.t.indecs {
        return bad(format!("{} is not the left perpendicular of its partner", render(x, &pair.t)));
    }
    if right_perp(x, &pair.t).indecs != pair.f.indecs {
        return bad(format!("{} is not the right perpendicular of its partner", render(x, &pair.f)));
    }
    if !proj.is_subset(&pair.t.indecs) || !inj.is_subset(&pair.f.indecs) {
        return bad("projectives or injectives are missing from the pair".into());
    }
    for sub in [&pair.t, &pair.f] {
        let v = check_extension_closed(&ExCat::new(x.cat.clone(), sub.clone()));
        match v.status {
            Status::Holds => {}
            Status::Unknown => return v,
            _ => return bad(format!("{} is not extension-closed", render(x, sub))),
        }
    }
    Verdict::holds()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumeratedPair {
    pub pair: Pair,
    pub report: CotorsionReport,
    pub coherence: Verdict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Enumeration {
    pub pairs: Vec<EnumeratedPair>,
    /// Candidates passing the perpendicularity filter that were rejected or undecided.
    pub rejected: Vec<(Pair, Verdict)>,
    pub subsets_examined: usize,
}

/// Every cotorsion pair of the carrier. A pair must satisfy `F = T^⊥`,
/// `T = ⊥F`, `P ⊆ T` and `I ⊆ F`, so only subsets `T` are enumerated.
pub fn enumerate_cotorsion_pairs(x: &ExCat) -> Result<Enumeration> {
    let idx = x.indices();
    let n = idx.len();
    if n > x.caps().subset_limit {
        return Err(Error::Refused(format!(
            "{n} indecomposables exceed the subset limit {}",
            x.caps().subset_limit
        )));
    }
    let proj: BTreeSet<usize> = x.projectives().into_iter().collect();
    let inj: BTreeSet<usize> = x.injectives().into_iter().collect();
    let mut out = Enumeration {
        pairs: Vec::new(),
        rejected: Vec::new(),
        subsets_examined: 0,
    };
    let candidates: Vec<Pair> = (0u64..(1u64 << n))
        .filter_map(|mask| {
            let t = Subcat::of((0..n).filter(|b| mask >> b & 1 == 1).map(|b| idx[b]));
            if !proj.is_subset(&t.indecs) {
                return None;
            }
            let f = right_perp(x, &t);
            (inj.is_subset(&f.indecs) && left_perp(x, &f).indecs == t.indecs).then_some(Pair { t, f })
        })
        .collect();
    out.subsets_examined = 1usize << n;
    let checked: Vec<(Pair, Result<CotorsionReport>)> = candidates
        .into_par_iter()
        .map(|pair| {
            let r = check_cotorsion_pair(x, &pair);
            (pair, r)
        })
        .collect();
    for (pair, report) in checked {
        let report = report?;
        if report.is_pair() {
            let coherence = coherence(x, &pair);
            out.pairs.push(EnumeratedPair { pair, report, coherence });
        } else {
            let v = report.overall();
            out.rejected.push((pair, v));
        }
    }
    Ok(out)
}

// ---- gluing

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SidePairs {
    pub t1: Subcat,
    pub f1: Subcat,
    pub t2: Subcat,
    pub f2: Subcat,
}

impl SidePairs {
    pub fn left(&self) -> Pair {
        Pair {
            t: self.t1.clone(),
            f: self.f1.clone(),
        }
    }

    pub fn right(&self) -> Pair {
        Pair {
            t: self.t2.clone(),
            f: self.f2.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GlueTrace {
    pub object: String,
    pub i_star_upper: String,
    pub j_star: String,
    pub i_shriek: String,
    pub in_t: bool,
    pub in_f: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GlueResult {
    pub pair: Pair,
    pub trace: Vec<GlueTrace>,
}

pub fn in_glued_t(s: &RecollementScenario, sides: &SidePairs, m: &Rep) -> Result<bool> {
    Ok(s.a.member_of(&sides.t1, &s.apply(IStarUpper, m))? && s.c.member_of(&sides.t2, &s.apply(JStarUpper, m))?)
}

pub fn in_glued_f(s: &RecollementScenario, sides: &SidePairs, m: &Rep) -> Result<bool> {
    Ok(s.a.member_of(&sides.f1, &s.apply(IShriek, m))? && s.c.member_of(&sides.f2, &s.apply(JStarUpper, m))?)
}

pub fn glue(s: &RecollementScenario, sides: &SidePairs) -> Result<GlueResult> {
    let mut t = BTreeSet::new();
    let mut f = BTreeSet::new();
    let mut trace = Vec::new();
    for b in s.b.carrier.iter() {
        let m = s.b.cat.object(b);
        let in_t = in_glued_t(s, sides, m)?;
        let in_f = in_glued_f(s, sides, m)?;
        if in_t {
            t.insert(b);
        }
        if in_f {
            f.insert(b);
        }
        trace.push(GlueTrace {
            object: s.b.label(b).to_string(),
            i_star_upper: s.a.describe(&s.apply(IStarUpper, m)),
            j_star: s.c.describe(&s.apply(JStarUpper, m)),
            i_shriek: s.a.describe(&s.apply(IShriek, m)),
            in_t,
            in_f,
        });
    }
    Ok(GlueResult {
        pair: Pair {
            t: Subcat::of(t),
            f: Subcat::of(f),
        },
        trace,
    })
}

/// Extension-closure of the glued classes, checked when both side pairs are
/// cotorsion pairs.
pub fn glued_closure(s: &RecollementScenario, sides: &SidePairs, glued: &GlueResult) -> Vec<Item> {
    let left = check_cotorsion_pair(&s.a, &sides.left()).map(|r| r.overall());
    let right = check_cotorsion_pair(&s.c, &sides.right()).map(|r| r.overall());
    let gate = Verdict::all([or_unknown(left), or_unknown(right)]);
    let mut out = Vec::new();
    for (id, sub) in [("T", &glued.pair.t), ("F", &glued.pair.f)] {
        let v = match gate.status {
            Status::Holds => check_extension_closed(&ExCat::new(s.b.cat.clone(), sub.clone())),
            Status::Unknown => gate.clone(),
            _ => Verdict::skipped(Witness::new("a side pair is not a cotorsion pair")),
        };
        out.push(Item::new(id, "closed under extensions", v));
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GluingConditions {
    pub hypotheses: Vec<Item>,
    pub conditions: Vec<Item>,
    pub cotorsion: CotorsionReport,
    pub consistency: Verdict,
}

fn or_unknown(r: Result<Verdict>) -> Verdict {
    r.unwrap_or_else(|e| Verdict::from_error(&e))
}

fn frobenius(x: &ExCat) -> Verdict {
    let ep = RecollementScenario::enough_projectives(x);
    let ei = RecollementScenario::enough_injectives(x);
    let (p, i) = (x.projectives(), x.injectives());
    let same = if p == i {
        Verdict::holds()
    } else {
        let show = |v: &[usize]| v.iter().map(|&k| x.label(k).to_string()).collect::<Vec<_>>().join(", ");
        Verdict::fails(Witness::new(format!(
            "projectives {{{}}} differ from injectives {{{}}}",
            show(&p),
            show(&i)
        )))
    };
    Verdict::all([ep, ei, same])
}

fn condition_iii(s: &RecollementScenario, sides: &SidePairs, glued: &Pair) -> Result<Verdict> {
    let alg = s.b.algebra();
    let p = s.b.p();
    for a in s.a.carrier.iter() {
        let ia = s.apply(IStarLower, s.a.cat.object(a));
        for t in sides.t2.iter() {
            let jt = s.apply(JShriek, s.c.cat.object(t));
            let hom = alg.hom_space(&ia, &jt);
            let maps: Vec<RepMap> = if space_size(p, hom.dim()) <= s.b.caps().hom_sweep as u128 {
                hom.elements().collect()
            } else {
                hom.basis.clone()
            };
            for f in &maps {
                for fi in glued.f.iter() {
                    let fo = s.b.cat.object(fi);
                    let from_t = alg.hom_space(&jt, fo);
                    let from_a = alg.hom_space(&ia, fo);
                    let cols: Vec<Vec<u32>> = from_t
                        .basis
                        .iter()
                        .map(|h| from_a.coords(&h.after(f)).expect("composite lies in the Hom space"))
                        .collect();
                    let rank = Mat::from_columns(p, from_a.dim(), &cols).rank();
                    if rank < from_a.dim() {
                        let w = Witness::new(format!(
                            "f^*: Hom(j_!{}, {}) -> Hom(i_*{}, {}) has rank {rank} < {}",
                            s.c.label(t),
                            s.b.label(fi),
                            s.a.label(a),
                            s.b.label(fi),
                            from_a.dim()
                        ))
                        .with_map("f", f)
                        .with_object("F", fo);
                        return Ok(Verdict::fails(w));
                    }
                }
            }
        }
    }
    Ok(Verdict::holds())
}

fn condition_iv(s: &RecollementScenario, sides: &SidePairs, glued: &Pair) -> Result<Verdict> {
    let alg = s.b.algebra();
    let mut first = Verdict::holds();
    for b in glued.t.iter() {
        let m = s.b.cat.object(b);
        let y = s.apply(JStarUpper, m);
        let back = s.apply(JShriek, &y);
        let iso = alg.is_isomorphic(&back, m, &s.b.cat.caps)?.is_some();
        if !iso || !s.c.member_of(&sides.t2, &y)? {
            first = Verdict::fails(Witness::new(format!("{} is not of the form j_!T with T in T₂", s.b.label(b))).with_object("T", m));
            break;
        }
    }
    if first.is_holds() {
        return Ok(first);
    }
    for f1 in sides.f1.iter() {
        let img = s.apply(IStarLower, s.a.cat.object(f1));
        for b in glued.t.iter() {
            if alg.ext_dim(s.b.cat.object(b), &img) > 0 {
                let msg = format!(
                    "{}; and Ext¹({}, i_*{}) ≠ 0, so i_*F₁ is not in T^⊥",
                    first.witness.as_ref().map(|w| w.message.as_str()).unwrap_or(""),
                    s.b.label(b),
                    s.a.label(f1)
                );
                return Ok(Verdict::fails(Witness::new(msg).with_object("T", s.b.cat.object(b)).with_object("i_*F1", &img)));
            }
        }
    }
    Ok(Verdict::holds())
}

pub fn gluing_conditions(s: &RecollementScenario, sides: &SidePairs, glued: &GlueResult) -> Result<GluingConditions> {
    let ex = s.exactness();
    let hypotheses = vec![
        Item::new("H1", "B has enough projectives", RecollementScenario::enough_projectives(&s.b)),
        Item::new("H2", "i^! is exact", ex[&IShriek].clone()),
        Item::new("H3", "j_! is exact", ex[&JShriek].clone()),
    ];
    let pair = &glued.pair;
    let conditions = vec![
        Item::new("(i)", "Ext¹(T, F) = 0", ext_orthogonal(&s.b, &pair.t, &pair.f)),
        Item::new("(ii)", "i^* is exact", ex[&IStarUpper].clone()),
        Item::new(
            "(iii)",
            "f^*: Hom(j_!T, F) -> Hom(i_*A, F) is surjective for every f: i_*A -> j_!T",
            or_unknown(condition_iii(s, sides, pair)),
        ),
        Item::new("(iv)", "T ⊆ j_!T₂ or i_*F₁ ⊆ T^⊥", or_unknown(condition_iv(s, sides, pair))),
        Item::new(
            "(v)",
            "A and B are Frobenius",
            Verdict::all([frobenius(&s.a), frobenius(&s.b)]),
        ),
    ];
    let cotorsion = check_cotorsion_pair(&s.b, pair)?;
    let hyps_hold = hypotheses.iter().all(|h| h.verdict.is_holds());
    let some_condition = conditions.iter().any(|c| c.verdict.is_holds());
    let consistency = if hyps_hold && some_condition && !cotorsion.is_pair() {
        if cotorsion.overall().status == Status::Unknown {
            Verdict::unknown("cotorsion check undecided")
        } else {
            Verdict::inconsistent(Witness::new("a sufficient condition holds but the glued pair is not a cotorsion pair"))
        }
    } else {
        Verdict::holds()
    };
    Ok(GluingConditions {
        hypotheses,
        conditions,
        cotorsion,
        consistency,
    })
}

// ---- approximations of glued pairs

#[derive(Clone, Debug)]
pub struct GluedApproximation {
    pub conf: Conflation,
    pub trace: Vec<String>,
}

fn stage_err(stage: usize, reason: impl Into<String>) -> Error {
    Error::Construction {
        stage,
        reason: reason.into(),
    }
}

fn side_approx(x: &ExCat, c: &Rep, pair: &Pair, dir: Direction, stage: usize) -> Result<Conflation> {
    match approximate(x, c, pair, dir)? {
        Outcome::Found(a) => Ok(a.conf),
        Outcome::No { reason, .. } => Err(stage_err(stage, reason)),
        Outcome::Unknown(cap) => Err(Error::CapReached(cap)),
    }
}

/// The approximation conflation of a glued pair at `m`, built from the side
/// approximations by pullbacks along units (direction `b`) or pushouts along
/// counits (direction `c`). Every stage's membership is certified.
pub fn glued_approximation(s: &RecollementScenario, sides: &SidePairs, m: &Rep, dir: Direction) -> Result<GluedApproximation> {
    let ex = s.exactness();
    if !ex[&IShriek].is_holds() {
        return Err(Error::Refused("the construction needs i^! to be exact".into()));
    }
    if dir == Direction::C && !ex[&JShriek].is_holds() {
        return Err(Error::Refused("the construction needs j_! to be exact".into()));
    }
    match dir {
        Direction::B => glued_b(s, sides, m),
        Direction::C => glued_c(s, sides, m),
    }
}

fn glued_b(s: &RecollementScenario, sides: &SidePairs, m: &Rep) -> Result<GluedApproximation> {
    let alg = s.b.algebra();
    let mut trace = Vec::new();
    let jm = s.apply(JStarUpper, m);
    let c1 = side_approx(&s.c, &jm, &sides.right(), Direction::B, 1)?;
    trace.push(format!("1. {}", describe_conflation(&s.c, &c1)));
    let jt2 = s.apply_map(JStarLower, &c1.proj);
    trace.push(format!("2. j_* gives {} -> {}", s.b.describe(&jt2.source), s.b.describe(&jt2.target)));
    let eta = s.unit(JStarUpper, JStarLower, m)?;
    let (h, to_jt2, h_to_m) = alg.pullback(&jt2, &eta);
    let _ = to_jt2;
    trace.push(format!("3. H = {}", s.b.describe(&h.rep)));
    let ih = s.apply(IStarUpper, &h.rep);
    let c2 = side_approx(&s.a, &ih, &sides.left(), Direction::B, 4)?;
    trace.push(format!("4. {}", describe_conflation(&s.a, &c2)));
    let it1 = s.apply_map(IStarLower, &c2.proj);
    let nu = s.unit(IStarUpper, IStarLower, &h.rep)?;
    let (t, _, t_to_h) = alg.pullback(&it1, &nu);
    trace.push(format!("5. T = {}", s.b.describe(&t.rep)));
    let g = h_to_m.after(&t_to_h);
    if !g.is_surjective() {
        return Err(stage_err(6, "T -> M is not surjective"));
    }
    let k = alg.kernel(&g);
    trace.push(format!("6. F = {}", s.b.describe(&k.rep)));
    let conf = Conflation { incl: k.incl, proj: g };
    if !in_glued_t(s, sides, conf.middle())? {
        return Err(stage_err(5, "T is not in the glued class"));
    }
    if !in_glued_f(s, sides, conf.left())? {
        return Err(stage_err(6, "F is not in the glued class"));
    }
    if !s.b.member(conf.middle())? || !s.b.member(conf.left())? {
        return Err(stage_err(6, "a term leaves the carrier"));
    }
    Ok(GluedApproximation { conf, trace })
}

fn glued_c(s: &RecollementScenario, sides: &SidePairs, m: &Rep) -> Result<GluedApproximation> {
    let alg = s.b.algebra();
    let mut trace = Vec::new();
    let jm = s.apply(JStarUpper, m);
    let c1 = side_approx(&s.c, &jm, &sides.right(), Direction::C, 1)?;
    trace.push(format!("1. {}", describe_conflation(&s.c, &c1)));
    let jf2 = s.apply_map(JShriek, &c1.incl);
    trace.push(format!("2. j_! gives {} -> {}", s.b.describe(&jf2.source), s.b.describe(&jf2.target)));
    let eps = s.counit(JShriek, JStarUpper, m)?;
    let (h, _, m_to_h) = alg.pushout(&jf2, &eps);
    trace.push(format!("3. H = {}", s.b.describe(&h.rep)));
    let ih = s.apply(IShriek, &h.rep);
    let c2 = side_approx(&s.a, &ih, &sides.left(), Direction::C, 4)?;
    trace.push(format!("4. {}", describe_conflation(&s.a, &c2)));
    let if1 = s.apply_map(IStarLower, &c2.incl);
    let eps2 = s.counit(IStarLower, IShriek, &h.rep)?;
    let (f, _, h_to_f) = alg.pushout(&if1, &eps2);
    trace.push(format!("5. F = {}", s.b.describe(&f.rep)));
    let g = h_to_f.after(&m_to_h);
    if !g.is_injective() {
        return Err(stage_err(6, "M -> F is not injective"));
    }
    let q = alg.cokernel(&g);
    trace.push(format!("6. T = {}", s.b.describe(&q.rep)));
    let conf = Conflation { incl: g, proj: q.proj };
    if !in_glued_f(s, sides, conf.middle())? {
        return Err(stage_err(5, "F is not in the glued class"));
    }
    if !in_glued_t(s, sides, conf.right())? {
        return Err(stage_err(6, "T is not in the glued class"));
    }
    if !s.b.member(conf.middle())? || !s.b.member(conf.right())? {
        return Err(stage_err(6, "a term leaves the carrier"));
    }
    Ok(GluedApproximation { conf, trace })
}

// ---- restriction

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Via {
    I,
    J,
}

impl Via {
    pub fn parse(s: &str) -> Result<Via> {
        match s {
            "i" => Ok(Via::I),
            "j" => Ok(Via::J),
            other => Err(Error::UnknownName(format!("restriction {other}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RestrictReport {
    pub input: CotorsionReport,
    pub preconditions: Vec<Item>,
    pub pair: Pair,
    pub result: CotorsionReport,
    pub consistency: Verdict,
}

/// `F(G(sub)) ⊆ sub` on generators.
fn stable_under(s: &RecollementScenario, first: FunctorTag, second: FunctorTag, sub: &Subcat) -> Result<Verdict> {
    for b in sub.iter() {
        let img = s.apply(second, &s.apply(first, s.b.cat.object(b)));
        if !s.b.member_of(sub, &img)? {
            let w = Witness::new(format!(
                "{}{}{} = {} leaves the class",
                second.symbol(),
                first.symbol(),
                s.b.label(b),
                s.b.describe(&img)
            ))
            .with_object("X", s.b.cat.object(b));
            return Ok(Verdict::fails(w));
        }
    }
    Ok(Verdict::holds())
}

fn add_image(s: &RecollementScenario, role: FunctorTag, sub: &Subcat) -> Result<Subcat> {
    let tgt = s.target(role);
    let mut out = BTreeSet::new();
    for b in sub.iter() {
        out.extend(tgt.cat.decompose_indices(&s.apply(role, s.b.cat.object(b)))?);
    }
    Ok(Subcat::of(out))
}

pub fn restrict_pair(s: &RecollementScenario, pair: &Pair, via: Via) -> Result<RestrictReport> {
    let input = check_cotorsion_pair(&s.b, pair)?;
    let (preconditions, restricted, target) = match via {
        Via::I => {
            let pre = vec![
                Item::new("i_*i^!U ⊆ U", "", or_unknown(stable_under(s, IShriek, IStarLower, &pair.t))),
                Item::new("i_*i^*U ⊆ U", "", or_unknown(stable_under(s, IStarUpper, IStarLower, &pair.t))),
            ];
            let r = Pair {
                t: add_image(s, IStarUpper, &pair.t)?,
                f: add_image(s, IShriek, &pair.f)?,
            };
            (pre, r, &s.a)
        }
        Via::J => {
            let pre = vec![
                Item::new("j_*j^*V ⊆ V", "", or_unknown(stable_under(s, JStarUpper, JStarLower, &pair.f))),
                Item::new("j_!j^*U ⊆ U", "", or_unknown(stable_under(s, JStarUpper, JShriek, &pair.t))),
            ];
            let r = Pair {
                t: add_image(s, JStarUpper, &pair.t)?,
                f: add_image(s, JStarUpper, &pair.f)?,
            };
            (pre, r, &s.c)
        }
    };
    let result = check_cotorsion_pair(target, &restricted)?;
    let pre_hold = match via {
        Via::I => preconditions.iter().all(|p| p.verdict.is_holds()),
        Via::J => preconditions.iter().any(|p| p.verdict.is_holds()),
    };
    let ex = s.exactness();
    let theorem_applies = input.is_pair()
        && pre_hold
        && ex[&IShriek].is_holds()
        && ex[&JShriek].is_holds()
        && RecollementScenario::enough_projectives(&s.b).is_holds();
    let consistency = if theorem_applies && !result.is_pair() && result.overall().status != Status::Unknown {
        Verdict::inconsistent(Witness::new("the restriction theorem applies but the restricted pair is not a cotorsion pair"))
    } else {
        Verdict::holds()
    };
    Ok(RestrictReport {
        input,
        preconditions,
        pair: restricted,
        result,
        consistency,
    })
}

/// Exactness of a single role, for callers outside a full recollement report.
pub fn role_exactness(s: &RecollementScenario, role: FunctorTag, mode: Mode) -> Verdict {
    functor_exactness(&s.functor(role), mode, s.source(role), s.target(role))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::a2;
    use crate::caps::Caps;
    use crate::repcat::ModCat;
    use std::sync::Arc;

    fn mod_a() -> ExCat {
        ExCat::full(Arc::new(ModCat::build(a2(2).unwrap(), Caps::default())))
    }

    fn idx(x: &ExCat, dims: &[usize]) -> usize {
        (0..x.cat.len()).find(|&i| x.cat.object(i).dims == dims).unwrap()
    }

    #[test]
    fn two_pairs_in_a2() {
        let x = mod_a();
        let e = enumerate_cotorsion_pairs(&x).unwrap();
        assert_eq!(e.pairs.len(), 2);
        let (s1, s2, p1) = (idx(&x, &[1, 0]), idx(&x, &[0, 1]), idx(&x, &[1, 1]));
        let all = Subcat::of([s1, s2, p1]);
        let h1 = Pair { t: Subcat::of([s2, p1]), f: all.clone() };
        let h2 = Pair { t: all, f: Subcat::of([s1, p1]) };
        let got: Vec<&Pair> = e.pairs.iter().map(|p| &p.pair).collect();
        assert!(got.contains(&&h1) && got.contains(&&h2));
        for p in &e.pairs {
            assert!(p.coherence.is_holds());
        }
    }

    #[test]
    fn projective_cover_approximation() {
        let x = mod_a();
        let (s1, s2, p1) = (idx(&x, &[1, 0]), idx(&x, &[0, 1]), idx(&x, &[1, 1]));
        let t = Subcat::of([s2, p1]);
        let f = Subcat::of([s1, s2, p1]);
        let Outcome::Found(a) = right_approximation(&x, x.cat.object(s1), &t, &f).unwrap() else {
            panic!()
        };
        assert_eq!(a.conf.middle().dims, vec![1, 1]);
        assert_eq!(a.conf.left().dims, vec![0, 1]);
        let t = Subcat::of([p1]);
        let o = right_approximation(&x, x.cat.object(s2), &t, &f).unwrap();
        assert!(matches!(o, Outcome::No { exact: true, .. }));
    }

    #[test]
    fn injective_envelope_approximation() {
        let x = mod_a();
        let (s1, s2, p1) = (idx(&x, &[1, 0]), idx(&x, &[0, 1]), idx(&x, &[1, 1]));
        let t = Subcat::of([s1, s2, p1]);
        let f = Subcat::of([s1, p1]);
        let Outcome::Found(a) = left_approximation(&x, x.cat.object(s2), &t, &f).unwrap() else {
            panic!()
        };
        assert_eq!(a.conf.middle().dims, vec![1, 1]);
        let o = left_approximation(&x, x.cat.object(s1), &t, &Subcat::of([s2])).unwrap();
        assert!(matches!(o, Outcome::No { exact: true, .. }));
    }
}
