//! Verification of recollement data on a concrete triangular-matrix instance:
//! the axioms (R1)–(R5), the standard consequences about the six functors,
//! and the conflation criteria built from units and counits.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exstruct::{four_term_check, functor_exactness, is_conflation, ExCat, Functor, Mode, Subcat};
use crate::morphcat::{FunctorTag, MorphismCategory, Side, ADJUNCTIONS};
use crate::repcat::{Rep, RepMap};
use crate::verdict::{Status, Verdict, Witness};

use FunctorTag::*;

/// Three carriers and a wiring of the six functor roles to implementations.
#[derive(Debug)]
pub struct RecollementScenario {
    pub mc: Arc<MorphismCategory>,
    pub a: ExCat,
    pub b: ExCat,
    pub c: ExCat,
    /// role -> implementation; the identity wiring unless deliberately altered
    pub roles: BTreeMap<FunctorTag, FunctorTag>,
    exactness: OnceLock<BTreeMap<FunctorTag, Verdict>>,
}

/// One functor role of a scenario, usable wherever a [`Functor`] is expected.
pub struct RoleFunctor<'a> {
    pub scenario: &'a RecollementScenario,
    pub role: FunctorTag,
}

impl Functor for RoleFunctor<'_> {
    fn name(&self) -> String {
        let imp = self.scenario.implementation(self.role);
        if imp == self.role {
            self.role.symbol().to_string()
        } else {
            format!("{} (wired to {})", self.role.symbol(), imp.symbol())
        }
    }

    fn obj(&self, m: &Rep) -> Rep {
        self.scenario.apply(self.role, m)
    }

    fn map(&self, f: &RepMap) -> RepMap {
        self.scenario.apply_map(self.role, f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Item {
    pub id: String,
    pub statement: String,
    pub verdict: Verdict,
}

impl Item {
    pub fn new(id: &str, statement: &str, verdict: Verdict) -> Self {
        Item {
            id: id.into(),
            statement: statement.into(),
            verdict,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecollementReport {
    pub axioms: Vec<Item>,
    pub consequences: Vec<Item>,
    pub conflations: Vec<Item>,
    pub identities: Vec<Item>,
}

impl RecollementReport {
    pub fn items(&self) -> impl Iterator<Item = &Item> {
        self.axioms
            .iter()
            .chain(&self.consequences)
            .chain(&self.conflations)
            .chain(&self.identities)
    }

    pub fn overall(&self) -> Status {
        self.items()
            .map(|i| i.verdict.status)
            .max_by_key(|s| s.severity())
            .unwrap_or(Status::Holds)
    }
}

fn or_unknown(r: Result<Verdict>) -> Verdict {
    r.unwrap_or_else(|e| Verdict::from_error(&e))
}

impl RecollementScenario {
    pub fn new(mc: Arc<MorphismCategory>, a: Subcat, b: Subcat, c: Subcat) -> Self {
        let a = ExCat::new(mc.base.clone(), a);
        let b = ExCat::new(mc.middle.clone(), b);
        let c = ExCat::new(mc.base.clone(), c);
        RecollementScenario {
            mc,
            a,
            b,
            c,
            roles: FunctorTag::ALL.into_iter().map(|t| (t, t)).collect(),
            exactness: OnceLock::new(),
        }
    }

    /// The abelian recollement `(mod A, mod T₂(A), mod A)`.
    pub fn abelian(mc: Arc<MorphismCategory>) -> Self {
        let na = mc.base.len();
        let nb = mc.middle.len();
        Self::new(mc, Subcat::full(na), Subcat::full(nb), Subcat::full(na))
    }

    /// Rewires `role` to be computed by `implementation`.
    pub fn rewire(mut self, role: FunctorTag, implementation: FunctorTag) -> Self {
        self.roles.insert(role, implementation);
        self.exactness = OnceLock::new();
        self
    }

    pub fn implementation(&self, role: FunctorTag) -> FunctorTag {
        self.roles[&role]
    }

    pub fn side(&self, side: Side) -> &ExCat {
        match side {
            Side::A => &self.a,
            Side::B => &self.b,
            Side::C => &self.c,
        }
    }

    pub fn source(&self, role: FunctorTag) -> &ExCat {
        self.side(role.source())
    }

    pub fn target(&self, role: FunctorTag) -> &ExCat {
        self.side(role.target())
    }

    pub fn apply(&self, role: FunctorTag, m: &Rep) -> Rep {
        self.mc.apply(self.implementation(role), m)
    }

    pub fn apply_map(&self, role: FunctorTag, h: &RepMap) -> RepMap {
        self.mc.apply_map(self.implementation(role), h)
    }

    pub fn functor(&self, role: FunctorTag) -> RoleFunctor<'_> {
        RoleFunctor { scenario: self, role }
    }

    /// Unit of the adjunction `left ⊣ right`, through the wiring.
    pub fn unit(&self, left: FunctorTag, right: FunctorTag, m: &Rep) -> Result<RepMap> {
        self.mc.unit(self.implementation(left), self.implementation(right), m)
    }

    pub fn counit(&self, left: FunctorTag, right: FunctorTag, m: &Rep) -> Result<RepMap> {
        self.mc.counit(self.implementation(left), self.implementation(right), m)
    }

    pub fn has_adjunction(&self, left: FunctorTag, right: FunctorTag) -> bool {
        ADJUNCTIONS.contains(&(self.implementation(left), self.implementation(right)))
    }

    /// Exactness verdict of every role, each computed once.
    pub fn exactness(&self) -> &BTreeMap<FunctorTag, Verdict> {
        self.exactness.get_or_init(|| {
            FunctorTag::ALL
                .into_iter()
                .map(|t| {
                    let v = functor_exactness(&self.functor(t), Mode::Exact, self.source(t), self.target(t));
                    (t, v)
                })
                .collect()
        })
    }

    pub fn is_exact(&self, role: FunctorTag) -> &Verdict {
        &self.exactness()[&role]
    }

    /// Every carrier indecomposable `M` admits a deflation from a sum of
    /// carrier projectives with kernel in the carrier.
    pub fn enough_projectives(x: &ExCat) -> Verdict {
        or_unknown(enough_projectives_inner(x))
    }

    pub fn enough_injectives(x: &ExCat) -> Verdict {
        or_unknown(enough_injectives_inner(x))
    }
}

fn enough_projectives_inner(x: &ExCat) -> Result<Verdict> {
    let alg = x.algebra();
    let proj = x.projectives();
    for m in x.carrier.iter() {
        let mo = x.cat.object(m);
        let maps: Vec<RepMap> = proj.iter().flat_map(|&p| alg.hom_basis(x.cat.object(p), mo)).collect();
        let (_, eval) = alg.copair(&maps, mo);
        if !x.is_deflation(&eval)? {
            let w = Witness::new(format!("no deflation from a projective onto {}", x.label(m))).with_object("M", mo);
            return Ok(Verdict::fails(w));
        }
    }
    Ok(Verdict::holds())
}

fn enough_injectives_inner(x: &ExCat) -> Result<Verdict> {
    let alg = x.algebra();
    let inj = x.injectives();
    for m in x.carrier.iter() {
        let mo = x.cat.object(m);
        let maps: Vec<RepMap> = inj.iter().flat_map(|&i| alg.hom_basis(mo, x.cat.object(i))).collect();
        let (_, coev) = alg.pair(&maps, mo);
        if !x.is_inflation(&coev)? {
            let w = Witness::new(format!("no inflation from {} into an injective", x.label(m))).with_object("M", mo);
            return Ok(Verdict::fails(w));
        }
    }
    Ok(Verdict::holds())
}

// ---- (R1)–(R5)

pub fn verify_axioms(s: &RecollementScenario) -> Vec<Item> {
    vec![
        Item::new("R1", "(i^*, i_*, i^!) and (j_!, j^*, j_*) are adjoint triples", or_unknown(r1(s))),
        Item::new("R2", "Im i_* = Ker j^*", or_unknown(r2(s))),
        Item::new("R3", "i_*, j_! and j_* are fully faithful", or_unknown(r3(s))),
        Item::new("R4", "i_*i^!X -> X -> j_*j^*X -> i_*A is left exact", or_unknown(r4(s))),
        Item::new("R5", "i_*A' -> j_!j^*X -> X -> i_*i^*X is right exact", or_unknown(r5(s))),
    ]
}

fn functors_land(s: &RecollementScenario) -> Result<Verdict> {
    for t in FunctorTag::ALL {
        let (src, tgt) = (s.source(t), s.target(t));
        for i in src.carrier.iter() {
            let img = s.apply(t, src.cat.object(i));
            if !tgt.member(&img)? {
                let w = Witness::new(format!("{} sends {} outside its target", t.symbol(), src.label(i)))
                    .with_object("X", src.cat.object(i))
                    .with_object("image", &img);
                return Ok(Verdict::fails(w));
            }
        }
    }
    Ok(Verdict::holds())
}

/// An object where `dim Hom(LX, Y) != dim Hom(X, RY)`, if any.
fn adjunction_dim_mismatch(s: &RecollementScenario, l: FunctorTag, r: FunctorTag) -> Option<Witness> {
    let (src, tgt) = (s.source(l), s.target(l));
    for x in src.carrier.iter() {
        let xo = src.cat.object(x);
        let lx = s.apply(l, xo);
        for y in tgt.carrier.iter() {
            let yo = tgt.cat.object(y);
            let ry = s.apply(r, yo);
            let lhs = tgt.algebra().hom_dim(&lx, yo);
            let rhs = src.algebra().hom_dim(xo, &ry);
            if lhs != rhs {
                let w = Witness::new(format!(
                    "dim Hom({}{}, {}) = {lhs} but dim Hom({}, {}{}) = {rhs}",
                    l.symbol(),
                    src.label(x),
                    tgt.label(y),
                    src.label(x),
                    r.symbol(),
                    tgt.label(y)
                ))
                .with_object("X", xo)
                .with_object("Y", yo);
                return Some(w);
            }
        }
    }
    None
}

fn r1(s: &RecollementScenario) -> Result<Verdict> {
    let land = functors_land(s)?;
    if !land.is_holds() {
        return Ok(land);
    }
    for (l, r) in ADJUNCTIONS {
        if let Some(w) = adjunction_dim_mismatch(s, l, r) {
            return Ok(Verdict::fails(w));
        }
        let v = triangle_identities(s, l, r);
        if !v.is_holds() {
            return Ok(v);
        }
        let v = naturality(s, l, r)?;
        if !v.is_holds() {
            return Ok(v);
        }
    }
    Ok(Verdict::holds())
}

/// `ε_{LX} ∘ L(η_X) = id` on the source carrier and `R(ε_Y) ∘ η_{RY} = id`
/// on the target carrier.
pub fn triangle_identities(s: &RecollementScenario, l: FunctorTag, r: FunctorTag) -> Verdict {
    if !s.has_adjunction(l, r) {
        return missing_adjunction(s, l, r, &Error::NotAdjoint(l.symbol().into(), r.symbol().into()));
    }
    or_unknown((|| {
        let (src, tgt) = (s.source(l), s.target(l));
        for x in src.carrier.iter() {
            let xo = src.cat.object(x);
            let lx = s.apply(l, xo);
            let lhs = s.counit(l, r, &lx)?.after(&s.apply_map(l, &s.unit(l, r, xo)?));
            if !lhs.is_iso() || lhs != RepMap::identity(s.mc.base.p(), &lx) {
                let w = Witness::new(format!("ε L(η) is not the identity of {}{}", l.symbol(), src.label(x)))
                    .with_object("X", xo);
                return Ok(Verdict::fails(w));
            }
        }
        for y in tgt.carrier.iter() {
            let yo = tgt.cat.object(y);
            let ry = s.apply(r, yo);
            let lhs = s.apply_map(r, &s.counit(l, r, yo)?).after(&s.unit(l, r, &ry)?);
            if lhs != RepMap::identity(s.mc.base.p(), &ry) {
                let w = Witness::new(format!("R(ε) η is not the identity of {}{}", r.symbol(), tgt.label(y)))
                    .with_object("Y", yo);
                return Ok(Verdict::fails(w));
            }
        }
        Ok(Verdict::holds())
    })())
}

fn naturality(s: &RecollementScenario, l: FunctorTag, r: FunctorTag) -> Result<Verdict> {
    let (src, tgt) = (s.source(l), s.target(l));
    let hom_cap = src.caps().hom_sweep;
    let mut checked = 0u64;
    for x in src.carrier.iter() {
        for y in src.carrier.iter() {
            let (xo, yo) = (src.cat.object(x), src.cat.object(y));
            for h in src.algebra().hom_basis(xo, yo) {
                checked += 1;
                if checked > hom_cap {
                    return Ok(Verdict::unknown("hom_sweep: naturality squares"));
                }
                let left = s.unit(l, r, yo)?.after(&h);
                let right = s.apply_map(r, &s.apply_map(l, &h)).after(&s.unit(l, r, xo)?);
                if left != right {
                    let w = Witness::new(format!("the unit of {} ⊣ {} is not natural", l.symbol(), r.symbol())).with_map("h", &h);
                    return Ok(Verdict::fails(w));
                }
            }
        }
    }
    for x in tgt.carrier.iter() {
        for y in tgt.carrier.iter() {
            let (xo, yo) = (tgt.cat.object(x), tgt.cat.object(y));
            for h in tgt.algebra().hom_basis(xo, yo) {
                let left = h.after(&s.counit(l, r, xo)?);
                let right = s.counit(l, r, yo)?.after(&s.apply_map(l, &s.apply_map(r, &h)));
                if left != right {
                    let w = Witness::new(format!("the counit of {} ⊣ {} is not natural", l.symbol(), r.symbol())).with_map("h", &h);
                    return Ok(Verdict::fails(w));
                }
            }
        }
    }
    Ok(Verdict::holds())
}

fn r2(s: &RecollementScenario) -> Result<Verdict> {
    let mut image = BTreeSet::new();
    for a in s.a.carrier.iter() {
        let img = s.apply(IStarLower, s.a.cat.object(a));
        image.extend(s.b.cat.decompose_indices(&img)?);
    }
    let mut kernel = BTreeSet::new();
    for b in s.b.carrier.iter() {
        if s.apply(JStarUpper, s.b.cat.object(b)).is_zero() {
            kernel.insert(b);
        }
    }
    if let Some(&b) = image.symmetric_difference(&kernel).next() {
        let which = if image.contains(&b) { "in Im i_* but not in Ker j^*" } else { "in Ker j^* but not in Im i_*" };
        let w = Witness::new(format!("{} is {which}", s.b.label(b))).with_object("X", s.b.cat.object(b));
        return Ok(Verdict::fails(w));
    }
    let names: Vec<&str> = image.iter().map(|&i| s.b.label(i)).collect();
    Ok(Verdict::holds_with(Witness::new(format!("Im i_* = Ker j^* = add({})", names.join(", ")))))
}

/// `Hom(X, Y) -> Hom(FX, FY)` is bijective on carrier indecomposables.
pub fn fully_faithful(s: &RecollementScenario, role: FunctorTag) -> Result<Verdict> {
    let (src, tgt) = (s.source(role), s.target(role));
    for x in src.carrier.iter() {
        for y in src.carrier.iter() {
            let (xo, yo) = (src.cat.object(x), src.cat.object(y));
            let hom = src.algebra().hom_space(xo, yo);
            let image_space = tgt.algebra().hom_space(&s.apply(role, xo), &s.apply(role, yo));
            let columns: Vec<Vec<u32>> = hom
                .basis
                .iter()
                .map(|h| image_space.coords(&s.apply_map(role, h)).ok_or_else(|| Error::BadRep("image map".into())))
                .collect::<Result<_>>()?;
            let rank = crate::exactlin::Mat::from_columns(src.p(), image_space.dim(), &columns).rank();
            if rank != hom.dim() || rank != image_space.dim() {
                let w = Witness::new(format!(
                    "{} maps Hom({}, {}) of dimension {} onto a subspace of rank {rank} in a space of dimension {}",
                    role.symbol(),
                    src.label(x),
                    src.label(y),
                    hom.dim(),
                    image_space.dim()
                ))
                .with_object("X", xo)
                .with_object("Y", yo);
                return Ok(Verdict::fails(w));
            }
        }
    }
    Ok(Verdict::holds())
}

fn r3(s: &RecollementScenario) -> Result<Verdict> {
    for role in [IStarLower, JShriek, JStarLower] {
        let v = fully_faithful(s, role)?;
        if !v.is_holds() {
            return Ok(v);
        }
    }
    Ok(Verdict::holds())
}

/// Whether `d` is (isomorphic to) `i_*A` with `A` in the left carrier; returns `A`.
fn of_form_i_lower(s: &RecollementScenario, d: &Rep) -> Result<Option<Rep>> {
    let a = s.apply(IShriek, d);
    let back = s.apply(IStarLower, &a);
    let iso = s.b.algebra().is_isomorphic(&back, d, &s.b.cat.caps)?.is_some();
    if iso && s.a.member(&a)? {
        Ok(Some(a))
    } else {
        Ok(None)
    }
}

fn missing_adjunction(s: &RecollementScenario, l: FunctorTag, r: FunctorTag, e: &Error) -> Verdict {
    match adjunction_dim_mismatch(s, l, r) {
        Some(w) => Verdict::fails(Witness {
            message: format!("no adjunction morphism for {} ⊣ {}: {}", l.symbol(), r.symbol(), w.message),
            ..w
        }),
        None => Verdict::from_error(e),
    }
}

fn r4(s: &RecollementScenario) -> Result<Verdict> {
    let alg = s.b.algebra();
    let mut used = Vec::new();
    for x in s.b.carrier.iter() {
        let xo = s.b.cat.object(x);
        let theta = match s.counit(IStarLower, IShriek, xo) {
            Ok(m) => m,
            Err(e) => return Ok(missing_adjunction(s, IStarLower, IShriek, &e)),
        };
        let vartheta = match s.unit(JStarUpper, JStarLower, xo) {
            Ok(m) => m,
            Err(e) => return Ok(missing_adjunction(s, JStarUpper, JStarLower, &e)),
        };
        let h = alg.cokernel(&vartheta).proj;
        let v = four_term_check(&s.b, &theta, &vartheta, &h, Mode::Left);
        if !v.is_holds() {
            return Ok(relabel(v, &format!("at X = {}", s.b.label(x))));
        }
        match of_form_i_lower(s, &h.target)? {
            Some(a) => used.push(format!("{}: A = {}", s.b.label(x), s.a.describe(&a))),
            None => {
                let w = Witness::new(format!("the fourth term at X = {} is not of the form i_*A", s.b.label(x)))
                    .with_object("D", &h.target);
                return Ok(Verdict::fails(w));
            }
        }
    }
    Ok(Verdict::holds_with(Witness::new(used.join("; "))))
}

fn r5(s: &RecollementScenario) -> Result<Verdict> {
    let alg = s.b.algebra();
    let mut used = Vec::new();
    for x in s.b.carrier.iter() {
        let xo = s.b.cat.object(x);
        let upsilon = match s.counit(JShriek, JStarUpper, xo) {
            Ok(m) => m,
            Err(e) => return Ok(missing_adjunction(s, JShriek, JStarUpper, &e)),
        };
        let nu = match s.unit(IStarUpper, IStarLower, xo) {
            Ok(m) => m,
            Err(e) => return Ok(missing_adjunction(s, IStarUpper, IStarLower, &e)),
        };
        let k = alg.kernel(&nu);
        let Some(g1) = k.factor(&upsilon) else {
            let w = Witness::new(format!("ν υ is not zero at X = {}", s.b.label(x))).with_object("X", xo);
            return Ok(Verdict::fails(w));
        };
        let a_prime = alg.kernel(&g1);
        let v = four_term_check(&s.b, &a_prime.incl, &upsilon, &nu, Mode::Right);
        if !v.is_holds() {
            return Ok(relabel(v, &format!("at X = {}", s.b.label(x))));
        }
        match of_form_i_lower(s, &a_prime.rep)? {
            Some(a) => used.push(format!("{}: A' = {}", s.b.label(x), s.a.describe(&a))),
            None => {
                let w = Witness::new(format!("the first term at X = {} is not of the form i_*A'", s.b.label(x)))
                    .with_object("A'", &a_prime.rep);
                return Ok(Verdict::fails(w));
            }
        }
    }
    Ok(Verdict::holds_with(Witness::new(used.join("; "))))
}

fn relabel(mut v: Verdict, suffix: &str) -> Verdict {
    if let Some(w) = v.witness.as_mut() {
        w.message = format!("{} {suffix}", w.message);
    }
    v
}

// ---- consequences of the axioms

fn gate(hypotheses: &[(&str, &Verdict)]) -> Option<Verdict> {
    for (name, v) in hypotheses {
        match v.status {
            Status::Holds | Status::Skipped => {}
            Status::Unknown => return Some(Verdict::unknown(format!("hypothesis {name}"))),
            _ => {
                let detail = v.witness.as_ref().map(|w| w.message.clone()).unwrap_or_default();
                let mut w = Witness::new(format!("hypothesis fails: {name}: {detail}"));
                if let Some(inner) = &v.witness {
                    w.objects = inner.objects.clone();
                    w.maps = inner.maps.clone();
                }
                return Some(Verdict::skipped(w));
            }
        }
    }
    None
}

/// Images of `sub` under `role`, tested against the additive closure `into`.
fn images_within(s: &RecollementScenario, role: FunctorTag, sub: &[usize], into: &[usize]) -> Result<Verdict> {
    let (src, tgt) = (s.source(role), s.target(role));
    let target = Subcat::of(into.iter().copied());
    for &i in sub {
        let img = s.apply(role, src.cat.object(i));
        if !tgt.member_of(&target, &img)? {
            let w = Witness::new(format!("{}{} = {} is not in the expected class", role.symbol(), src.label(i), tgt.describe(&img)))
                .with_object("X", src.cat.object(i))
                .with_object("image", &img);
            return Ok(Verdict::fails(w));
        }
    }
    Ok(Verdict::holds())
}

/// `add(F(sub))` equals `add(expected)` as sets of indecomposables.
fn add_image_equals(s: &RecollementScenario, role: FunctorTag, sub: &[usize], expected: &[usize]) -> Result<Verdict> {
    let (src, tgt) = (s.source(role), s.target(role));
    let mut got = BTreeSet::new();
    for &i in sub {
        got.extend(tgt.cat.decompose_indices(&s.apply(role, src.cat.object(i)))?);
    }
    let want: BTreeSet<usize> = expected.iter().copied().collect();
    if got != want {
        let show = |set: &BTreeSet<usize>| set.iter().map(|&i| tgt.label(i).to_string()).collect::<Vec<_>>().join(", ");
        let w = Witness::new(format!("add({}(...)) = {{{}}} but expected {{{}}}", role.symbol(), show(&got), show(&want)));
        return Ok(Verdict::fails(w));
    }
    Ok(Verdict::holds_with(Witness::new(format!(
        "add = {{{}}}",
        got.iter().map(|&i| tgt.label(i).to_string()).collect::<Vec<_>>().join(", ")
    ))))
}

fn ext_dim_identity(s: &RecollementScenario, l: FunctorTag, r: FunctorTag) -> Result<Verdict> {
    let (src, tgt) = (s.source(l), s.target(l));
    for x in src.carrier.iter() {
        let xo = src.cat.object(x);
        let lx = s.apply(l, xo);
        for y in tgt.carrier.iter() {
            let yo = tgt.cat.object(y);
            let lhs = tgt.algebra().ext_dim(&lx, yo);
            let rhs = src.algebra().ext_dim(xo, &s.apply(r, yo));
            if lhs != rhs {
                let w = Witness::new(format!(
                    "dim Ext¹({}{}, {}) = {lhs} but dim Ext¹({}, {}{}) = {rhs}",
                    l.symbol(),
                    src.label(x),
                    tgt.label(y),
                    src.label(x),
                    r.symbol(),
                    tgt.label(y)
                ))
                .with_object("X", xo)
                .with_object("Y", yo);
                return Ok(Verdict::fails(w));
            }
        }
    }
    Ok(Verdict::holds())
}

fn all_vanish(s: &RecollementScenario, first: FunctorTag, second: FunctorTag) -> Result<Verdict> {
    let src = s.source(first);
    for i in src.carrier.iter() {
        let m = s.apply(second, &s.apply(first, src.cat.object(i)));
        if !m.is_zero() {
            let w = Witness::new(format!("{}{}{} is not zero", second.symbol(), first.symbol(), src.label(i)))
                .with_object("X", src.cat.object(i))
                .with_object("image", &m);
            return Ok(Verdict::fails(w));
        }
    }
    Ok(Verdict::holds())
}

fn all_iso(s: &RecollementScenario, side: Side, f: impl Fn(&Rep) -> Result<RepMap>, what: &str) -> Result<Verdict> {
    let x = s.side(side);
    for i in x.carrier.iter() {
        let m = f(x.cat.object(i))?;
        if !m.is_iso() {
            let w = Witness::new(format!("{what} is not invertible at {}", x.label(i))).with_map("map", &m);
            return Ok(Verdict::fails(w));
        }
    }
    Ok(Verdict::holds())
}

pub fn consequence_suite(s: &RecollementScenario) -> Vec<Item> {
    let ex = s.exactness();
    let ep_b = RecollementScenario::enough_projectives(&s.b);
    let ei_b = RecollementScenario::enough_injectives(&s.b);
    let ep_c = RecollementScenario::enough_projectives(&s.c);
    let proj = |x: &ExCat| x.projectives();
    let inj = |x: &ExCat| x.injectives();
    let mut out = Vec::new();

    let mut push = |id: &str, st: &str, hyps: &[(&str, &Verdict)], body: &dyn Fn() -> Result<Verdict>| {
        let v = gate(hyps).unwrap_or_else(|| or_unknown(body()));
        out.push(Item::new(id, st, v));
    };

    push("units invertible", "i^*i_* ≅ Id, Id ≅ i^!i_*, Id ≅ j^*j_!, j^*j_* ≅ Id", &[], &|| {
        let checks = [
            all_iso(s, Side::A, |m| s.counit(IStarUpper, IStarLower, m), "i^*i_* -> Id")?,
            all_iso(s, Side::A, |m| s.unit(IStarLower, IShriek, m), "Id -> i^!i_*")?,
            all_iso(s, Side::C, |m| s.unit(JShriek, JStarUpper, m), "Id -> j^*j_!")?,
            all_iso(s, Side::C, |m| s.counit(JStarUpper, JStarLower, m), "j^*j_* -> Id")?,
        ];
        Ok(Verdict::all(checks))
    });
    push("composites vanish", "i^*j_! = 0 and i^!j_* = 0", &[], &|| {
        Ok(Verdict::all([all_vanish(s, JShriek, IStarUpper)?, all_vanish(s, JStarLower, IShriek)?]))
    });
    push("i^*, i^! keep proj/inj", "i^* preserves projectives and i^! preserves injectives", &[], &|| {
        Ok(Verdict::all([
            images_within(s, IStarUpper, &proj(&s.b), &proj(&s.a))?,
            images_within(s, IShriek, &inj(&s.b), &inj(&s.a))?,
        ]))
    });
    push("j_!, j_* keep proj/inj", "j_! preserves projectives and j_* preserves injectives", &[], &|| {
        Ok(Verdict::all([
            images_within(s, JShriek, &proj(&s.c), &proj(&s.b))?,
            images_within(s, JStarLower, &inj(&s.c), &inj(&s.b))?,
        ]))
    });
    push("i_* keeps proj", "if i^! is exact, i_* preserves projectives", &[("i^! exact", &ex[&IShriek])], &|| {
        images_within(s, IStarLower, &proj(&s.a), &proj(&s.b))
    });
    push("j^* keeps proj", "if j_* is exact, j^* preserves projectives", &[("j_* exact", &ex[&JStarLower])], &|| {
        images_within(s, JStarUpper, &proj(&s.b), &proj(&s.c))
    });
    push("i_* keeps inj", "if i^* is exact, i_* preserves injectives", &[("i^* exact", &ex[&IStarUpper])], &|| {
        images_within(s, IStarLower, &inj(&s.a), &inj(&s.b))
    });
    push("j^* keeps inj", "if j_! is exact, j^* preserves injectives", &[("j_! exact", &ex[&JShriek])], &|| {
        images_within(s, JStarUpper, &inj(&s.b), &inj(&s.c))
    });
    push(
        "P(A)",
        "if B has enough projectives, so has A and P(A) = add(i^*P(B))",
        &[("B has enough projectives", &ep_b)],
        &|| {
            Ok(Verdict::all([
                RecollementScenario::enough_projectives(&s.a),
                add_image_equals(s, IStarUpper, &proj(&s.b), &proj(&s.a))?,
            ]))
        },
    );
    push(
        "I(A)",
        "if B has enough injectives, so has A and I(A) = add(i^!I(B))",
        &[("B has enough injectives", &ei_b)],
        &|| {
            Ok(Verdict::all([
                RecollementScenario::enough_injectives(&s.a),
                add_image_equals(s, IShriek, &inj(&s.b), &inj(&s.a))?,
            ]))
        },
    );
    push(
        "P(C)",
        "if B has enough projectives and j_* is exact, C has enough projectives and P(C) = add(j^*P(B))",
        &[("B has enough projectives", &ep_b), ("j_* exact", &ex[&JStarLower])],
        &|| {
            Ok(Verdict::all([
                RecollementScenario::enough_projectives(&s.c),
                add_image_equals(s, JStarUpper, &proj(&s.b), &proj(&s.c))?,
            ]))
        },
    );
    push(
        "I(C)",
        "if B has enough injectives and j_! is exact, C has enough injectives and I(C) = add(j^*I(B))",
        &[("B has enough injectives", &ei_b), ("j_! exact", &ex[&JShriek])],
        &|| {
            Ok(Verdict::all([
                RecollementScenario::enough_injectives(&s.c),
                add_image_equals(s, JStarUpper, &inj(&s.b), &inj(&s.c))?,
            ]))
        },
    );
    push(
        "ext via i^! exact",
        "if B has enough projectives and i^! is exact, Ext¹(i_*X, Y) ≅ Ext¹(X, i^!Y)",
        &[("B has enough projectives", &ep_b), ("i^! exact", &ex[&IShriek])],
        &|| ext_dim_identity(s, IStarLower, IShriek),
    );
    push(
        "ext via j_! exact",
        "if C has enough projectives and j_! is exact, Ext¹(j_!Z, Y) ≅ Ext¹(Z, j^*Y)",
        &[("C has enough projectives", &ep_c), ("j_! exact", &ex[&JShriek])],
        &|| ext_dim_identity(s, JShriek, JStarUpper),
    );
    push("j_! exact from i^*", "if i^* is exact, j_! is exact", &[("i^* exact", &ex[&IStarUpper])], &|| Ok(ex[&JShriek].clone()));
    push("j_* exact from i^!", "if i^! is exact, j_* is exact", &[("i^! exact", &ex[&IShriek])], &|| Ok(ex[&JStarLower].clone()));
    out
}

/// The unit/counit sequences are genuine conflations under one-sided exactness.
pub fn conflation_check(s: &RecollementScenario) -> Vec<Item> {
    let ex = s.exactness();
    let one = gate(&[("i^! exact", &ex[&IShriek])]).unwrap_or_else(|| {
        or_unknown((|| {
            for x in s.b.carrier.iter() {
                let xo = s.b.cat.object(x);
                let theta = s.counit(IStarLower, IShriek, xo)?;
                let vartheta = s.unit(JStarUpper, JStarLower, xo)?;
                let v = is_conflation(&s.b, &theta, &vartheta);
                if !v.is_holds() {
                    return Ok(relabel(v, &format!("at X = {}", s.b.label(x))));
                }
            }
            Ok(Verdict::holds())
        })())
    });
    let two = gate(&[("i^* exact", &ex[&IStarUpper])]).unwrap_or_else(|| {
        or_unknown((|| {
            for x in s.b.carrier.iter() {
                let xo = s.b.cat.object(x);
                let upsilon = s.counit(JShriek, JStarUpper, xo)?;
                let nu = s.unit(IStarUpper, IStarLower, xo)?;
                let v = is_conflation(&s.b, &upsilon, &nu);
                if !v.is_holds() {
                    return Ok(relabel(v, &format!("at X = {}", s.b.label(x))));
                }
            }
            Ok(Verdict::holds())
        })())
    });
    vec![
        Item::new("conflation via i^!", "if i^! is exact, i_*i^!X -> X -> j_*j^*X is a conflation", one),
        Item::new("conflation via i^*", "if i^* is exact, j_!j^*X -> X -> i_*i^*X is a conflation", two),
    ]
}

/// Triangle identities for all four adjunctions and the Ext¹ adjunction
/// isomorphism, gated on its exactness and projectivity hypotheses.
pub fn identity_suite(s: &RecollementScenario) -> Vec<Item> {
    let ex = s.exactness();
    let mut out = Vec::new();
    for (l, r) in ADJUNCTIONS {
        out.push(Item::new(
            &format!("triangle {}⊣{}", l.symbol(), r.symbol()),
            "ε_{FX} F(η_X) = id and G(ε_Y) η_{GY} = id",
            triangle_identities(s, l, r),
        ));
    }
    for (l, r) in ADJUNCTIONS {
        let (src, tgt) = (s.source(l), s.target(l));
        let first = Verdict::all([
            RecollementScenario::enough_projectives(src),
            ex[&l].clone(),
            or_unknown(images_within(s, l, &src.projectives(), &tgt.projectives())),
        ]);
        let second = Verdict::all([
            RecollementScenario::enough_injectives(tgt),
            ex[&r].clone(),
            or_unknown(images_within(s, r, &tgt.injectives(), &src.injectives())),
        ]);
        let v = if first.is_holds() || second.is_holds() {
            or_unknown(ext_dim_identity(s, l, r))
        } else {
            let pick = if first.status == Status::Unknown { &second } else { &first };
            gate(&[("source has enough projectives and F is exact preserving projectives, or dually", pick)])
                .unwrap_or_else(|| Verdict::unknown("hypothesis"))
        };
        out.push(Item::new(
            &format!("ext {}⊣{}", l.symbol(), r.symbol()),
            "Ext¹(FX, Y) ≅ Ext¹(X, GY)",
            v,
        ));
    }
    out
}

/// The full report, with theorem-backed failures escalated once the axioms hold.
pub fn full_report(s: &RecollementScenario) -> RecollementReport {
    let axioms = verify_axioms(s);
    let mut report = RecollementReport {
        consequences: consequence_suite(s),
        conflations: conflation_check(s),
        identities: identity_suite(s),
        axioms,
    };
    if report.axioms.iter().all(|i| i.verdict.is_holds()) {
        for item in report
            .consequences
            .iter_mut()
            .chain(report.conflations.iter_mut())
            .chain(report.identities.iter_mut())
        {
            if item.verdict.status == Status::Fails {
                item.verdict.status = Status::Inconsistent;
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::a2;
    use crate::caps::Caps;
    use crate::repcat::ModCat;

    fn scenario() -> RecollementScenario {
        let caps = Caps::default();
        let base = Arc::new(ModCat::build(a2(2).unwrap(), caps.clone()));
        RecollementScenario::abelian(Arc::new(MorphismCategory::build(base, &caps).unwrap()))
    }

    #[test]
    fn abelian_axioms_hold() {
        let s = scenario();
        for item in verify_axioms(&s) {
            assert!(item.verdict.is_holds(), "{} {}", item.id, item.verdict);
        }
    }

    #[test]
    fn abelian_exactness_profile() {
        let s = scenario();
        let ex = s.exactness();
        assert_eq!(ex[&IStarUpper].status, Status::Fails);
        for t in [IStarLower, IShriek, JShriek, JStarUpper, JStarLower] {
            assert!(ex[&t].is_holds(), "{t}");
        }
    }

    #[test]
    fn corrupted_wiring_breaks_r4() {
        let s = scenario().rewire(JStarLower, JShriek);
        let items = verify_axioms(&s);
        let r4 = items.iter().find(|i| i.id == "R4").unwrap();
        assert_eq!(r4.verdict.status, Status::Fails);
        assert!(!r4.verdict.witness.as_ref().unwrap().objects.is_empty());
    }

    #[test]
    fn report_is_clean() {
        let s = scenario();
        let r = full_report(&s);
        for item in r.items() {
            assert!(matches!(item.verdict.status, Status::Holds | Status::Skipped), "{} {}", item.id, item.verdict);
        }
        let p2 = r.conflations.iter().find(|i| i.id == "conflation via i^*").unwrap();
        assert_eq!(p2.verdict.status, Status::Skipped);
    }
}
