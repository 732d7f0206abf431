//! The morphism category `Mor(A)`, realized as modules over the triangular
//! matrix algebra `T₂(A)`, together with the six recollement functors.
//!
//! Vertex order of `T₂(A)`: the vertices of `A` (top, carrying `X`), then their
//! primed copies (bottom, carrying `Y`). Arrow order: the arrows of `A`, their
//! primed copies, then one connecting arrow `c_v: v' -> v` per vertex. An
//! object is a triple `(X; Y)_f` with `f: Y -> X` given by the connecting arrows.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::{Algebra, Quiver, Relation};
use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::exactlin::{space_size, Mat};
use crate::exstruct::Functor;
use crate::repcat::{Catalog, Conflation, ModCat, Rep, RepMap};

pub fn triangular_matrix_algebra(a: &Algebra) -> Result<Algebra> {
    let q = a.quiver();
    let n = q.vertex_count();
    let na = q.arrows().len();
    let mut vertices: Vec<String> = q.vertices().to_vec();
    vertices.extend(q.vertices().iter().map(|v| format!("{v}'")));
    let mut arrows = Vec::new();
    for ar in q.arrows() {
        arrows.push((ar.label.clone(), q.vertices()[ar.source].clone(), q.vertices()[ar.target].clone()));
    }
    for ar in q.arrows() {
        arrows.push((
            format!("{}'", ar.label),
            format!("{}'", q.vertices()[ar.source]),
            format!("{}'", q.vertices()[ar.target]),
        ));
    }
    for v in q.vertices() {
        arrows.push((format!("c_{v}"), format!("{v}'"), v.clone()));
    }
    let quiver = Quiver::new(vertices, arrows)?;
    let p = a.p();
    let mut rels = Vec::new();
    for r in a.relations() {
        rels.push(r.clone());
        rels.push(Relation::new(
            r.terms
                .iter()
                .map(|(c, path)| (*c, path.iter().map(|&x| x + na).collect()))
                .collect(),
        ));
    }
    for (i, ar) in q.arrows().iter().enumerate() {
        // a ∘ c_v = c_w ∘ a'
        let cv = 2 * na + ar.source;
        let cw = 2 * na + ar.target;
        rels.push(Relation::new(vec![(1, vec![cv, i]), (p - 1, vec![i + na, cw])]));
    }
    debug_assert_eq!(quiver.arrows().len(), 2 * na + n);
    Algebra::new(quiver, rels, a.field())
}

/// `(X; Y)_f` with `f: Y -> X`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Triple {
    pub x: Rep,
    pub y: Rep,
    pub f: RepMap,
}

/// A morphism of triples `(u, v)` with `u f = f' v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TripleMap {
    pub u: RepMap,
    pub v: RepMap,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FunctorTag {
    /// `i^*`
    IStarUpper,
    /// `i_*`
    IStarLower,
    /// `i^!`
    IShriek,
    /// `j_!`
    JShriek,
    /// `j^*`
    JStarUpper,
    /// `j_*`
    JStarLower,
}

/// The three categories of a recollement.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    A,
    B,
    C,
}

impl FunctorTag {
    pub const ALL: [FunctorTag; 6] = [
        FunctorTag::IStarUpper,
        FunctorTag::IStarLower,
        FunctorTag::IShriek,
        FunctorTag::JShriek,
        FunctorTag::JStarUpper,
        FunctorTag::JStarLower,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FunctorTag::IStarUpper => "i_star_upper",
            FunctorTag::IStarLower => "i_star_lower",
            FunctorTag::IShriek => "i_shriek",
            FunctorTag::JShriek => "j_lower_shriek",
            FunctorTag::JStarUpper => "j_star",
            FunctorTag::JStarLower => "j_lower_star",
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            FunctorTag::IStarUpper => "i^*",
            FunctorTag::IStarLower => "i_*",
            FunctorTag::IShriek => "i^!",
            FunctorTag::JShriek => "j_!",
            FunctorTag::JStarUpper => "j^*",
            FunctorTag::JStarLower => "j_*",
        }
    }

    pub fn parse(s: &str) -> Result<FunctorTag> {
        let t = s.trim();
        FunctorTag::ALL
            .into_iter()
            .find(|f| f.name() == t || f.symbol() == t)
            .ok_or_else(|| Error::UnknownName(format!("functor {t}")))
    }

    pub fn source(self) -> Side {
        match self {
            FunctorTag::IStarUpper | FunctorTag::IShriek | FunctorTag::JStarUpper => Side::B,
            FunctorTag::IStarLower => Side::A,
            FunctorTag::JShriek | FunctorTag::JStarLower => Side::C,
        }
    }

    pub fn target(self) -> Side {
        match self {
            FunctorTag::IStarUpper | FunctorTag::IShriek => Side::A,
            FunctorTag::JStarUpper => Side::C,
            FunctorTag::IStarLower | FunctorTag::JShriek | FunctorTag::JStarLower => Side::B,
        }
    }
}

impl fmt::Display for FunctorTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// The four adjunctions `F ⊣ G` of the two adjoint triples.
pub const ADJUNCTIONS: [(FunctorTag, FunctorTag); 4] = [
    (FunctorTag::IStarUpper, FunctorTag::IStarLower),
    (FunctorTag::IStarLower, FunctorTag::IShriek),
    (FunctorTag::JShriek, FunctorTag::JStarUpper),
    (FunctorTag::JStarUpper, FunctorTag::JStarLower),
];

/// `mod A`, `Mor(A) = mod T₂(A)` and the functors between them.
#[derive(Debug)]
pub struct MorphismCategory {
    pub base: Arc<ModCat>,
    pub middle: Arc<ModCat>,
}

impl MorphismCategory {
    /// Builds `T₂(A)` and its catalog from triples over the base catalog.
    pub fn build(base: Arc<ModCat>, caps: &Caps) -> Result<Self> {
        let t2 = triangular_matrix_algebra(&base.algebra)?;
        let catalog = morphism_catalog(&base, &t2, caps);
        let middle = Arc::new(ModCat::new(t2, catalog, caps.clone()));
        let mc = MorphismCategory { base, middle };
        Ok(mc)
    }

    pub fn from_parts(base: Arc<ModCat>, middle: Arc<ModCat>) -> Self {
        MorphismCategory { base, middle }
    }

    fn n(&self) -> usize {
        self.base.algebra.vertex_count()
    }

    fn na(&self) -> usize {
        self.base.algebra.arrow_count()
    }

    fn p(&self) -> u32 {
        self.base.p()
    }

    pub fn category(&self, side: Side) -> &ModCat {
        match side {
            Side::B => &self.middle,
            Side::A | Side::C => &self.base,
        }
    }

    pub fn to_triple(&self, m: &Rep) -> Triple {
        let (n, na) = (self.n(), self.na());
        let x = Rep {
            dims: m.dims[..n].to_vec(),
            mats: m.mats[..na].to_vec(),
        };
        let y = Rep {
            dims: m.dims[n..].to_vec(),
            mats: m.mats[na..2 * na].to_vec(),
        };
        let f = RepMap {
            source: y.clone(),
            target: x.clone(),
            comps: m.mats[2 * na..].to_vec(),
        };
        Triple { x, y, f }
    }

    pub fn from_triple(&self, t: &Triple) -> Rep {
        let mut dims = t.x.dims.clone();
        dims.extend_from_slice(&t.y.dims);
        let mut mats = t.x.mats.clone();
        mats.extend(t.y.mats.iter().cloned());
        mats.extend(t.f.comps.iter().cloned());
        Rep { dims, mats }
    }

    /// Checks that the connecting maps form a morphism `Y -> X`.
    pub fn triple_from_rep(&self, m: &Rep) -> Result<Triple> {
        self.middle.algebra.validate_rep(m)?;
        let t = self.to_triple(m);
        self.base.algebra.validate_map(&t.f)?;
        Ok(t)
    }

    pub fn to_triple_map(&self, h: &RepMap) -> TripleMap {
        let n = self.n();
        let s = self.to_triple(&h.source);
        let t = self.to_triple(&h.target);
        TripleMap {
            u: RepMap {
                source: s.x,
                target: t.x,
                comps: h.comps[..n].to_vec(),
            },
            v: RepMap {
                source: s.y,
                target: t.y,
                comps: h.comps[n..].to_vec(),
            },
        }
    }

    pub fn from_triple_map(&self, source: &Triple, target: &Triple, m: &TripleMap) -> RepMap {
        let mut comps = m.u.comps.clone();
        comps.extend(m.v.comps.iter().cloned());
        RepMap {
            source: self.from_triple(source),
            target: self.from_triple(target),
            comps,
        }
    }

    fn zero_base(&self) -> Rep {
        self.base.algebra.zero_rep()
    }

    fn triple(&self, x: &Rep, y: &Rep, f: RepMap) -> Rep {
        self.from_triple(&Triple {
            x: x.clone(),
            y: y.clone(),
            f,
        })
    }

    pub fn apply(&self, tag: FunctorTag, m: &Rep) -> Rep {
        let p = self.p();
        match tag {
            FunctorTag::IStarUpper => {
                let t = self.to_triple(m);
                self.base.algebra.cokernel(&t.f).rep
            }
            FunctorTag::IShriek => self.to_triple(m).x,
            FunctorTag::JStarUpper => self.to_triple(m).y,
            FunctorTag::IStarLower => {
                let z = self.zero_base();
                self.triple(m, &z, RepMap::zero(p, &z, m))
            }
            FunctorTag::JShriek => self.triple(m, m, RepMap::identity(p, m)),
            FunctorTag::JStarLower => {
                let z = self.zero_base();
                self.triple(&z, m, RepMap::zero(p, m, &z))
            }
        }
    }

    pub fn apply_map(&self, tag: FunctorTag, h: &RepMap) -> RepMap {
        let p = self.p();
        let src = self.apply(tag, &h.source);
        let tgt = self.apply(tag, &h.target);
        let comps = match tag {
            FunctorTag::IStarUpper => {
                let tm = self.to_triple_map(h);
                let s = self.base.algebra.cokernel(&self.to_triple(&h.source).f);
                let t = self.base.algebra.cokernel(&self.to_triple(&h.target).f);
                return s.induce(&t.proj.after(&tm.u));
            }
            FunctorTag::IShriek => self.to_triple_map(h).u.comps,
            FunctorTag::JStarUpper => self.to_triple_map(h).v.comps,
            FunctorTag::IStarLower => {
                let mut c = h.comps.clone();
                c.extend(h.source.dims.iter().map(|_| Mat::zeros(p, 0, 0)));
                c
            }
            FunctorTag::JShriek => {
                let mut c = h.comps.clone();
                c.extend(h.comps.iter().cloned());
                c
            }
            FunctorTag::JStarLower => {
                let mut c: Vec<Mat> = h.source.dims.iter().map(|_| Mat::zeros(p, 0, 0)).collect();
                c.extend(h.comps.iter().cloned());
                c
            }
        };
        RepMap {
            source: src,
            target: tgt,
            comps,
        }
    }

    /// Applies a composite given in application order.
    pub fn apply_all(&self, tags: &[FunctorTag], m: &Rep) -> Rep {
        tags.iter().fold(m.clone(), |acc, &t| self.apply(t, &acc))
    }

    pub fn apply_map_all(&self, tags: &[FunctorTag], h: &RepMap) -> RepMap {
        tags.iter().fold(h.clone(), |acc, &t| self.apply_map(t, &acc))
    }

    fn check_adjunction(left: FunctorTag, right: FunctorTag) -> Result<()> {
        if ADJUNCTIONS.contains(&(left, right)) {
            Ok(())
        } else {
            Err(Error::NotAdjoint(left.symbol().into(), right.symbol().into()))
        }
    }

    /// Unit `η_m: m -> G F m` of `F ⊣ G`.
    pub fn unit(&self, left: FunctorTag, right: FunctorTag, m: &Rep) -> Result<RepMap> {
        Self::check_adjunction(left, right)?;
        let p = self.p();
        let target = self.apply(right, &self.apply(left, m));
        let comps = match left {
            FunctorTag::IStarUpper => {
                // (π, 0): (X; Y)_f -> (Coker f; 0)
                let t = self.to_triple(m);
                let q = self.base.algebra.cokernel(&t.f);
                let mut c = q.proj.comps.clone();
                c.extend(t.y.dims.iter().map(|&d| Mat::zeros(p, 0, d)));
                c
            }
            FunctorTag::JStarUpper => {
                // (0, id): (X; Y)_f -> (0; Y)
                let t = self.to_triple(m);
                let mut c: Vec<Mat> = t.x.dims.iter().map(|&d| Mat::zeros(p, 0, d)).collect();
                c.extend(t.y.dims.iter().map(|&d| Mat::identity(p, d)));
                c
            }
            _ => return self.expect_target(RepMap::identity(p, m), &target),
        };
        let map = RepMap {
            source: m.clone(),
            target,
            comps,
        };
        self.validate_on(right.target(), &map)?;
        Ok(map)
    }

    /// Counit `ε_m: F G m -> m` of `F ⊣ G`.
    pub fn counit(&self, left: FunctorTag, right: FunctorTag, m: &Rep) -> Result<RepMap> {
        Self::check_adjunction(left, right)?;
        let p = self.p();
        let source = self.apply(left, &self.apply(right, m));
        let comps = match right {
            FunctorTag::IShriek => {
                // (id, 0): (X; 0) -> (X; Y)_f
                let t = self.to_triple(m);
                let mut c: Vec<Mat> = t.x.dims.iter().map(|&d| Mat::identity(p, d)).collect();
                c.extend(t.y.dims.iter().map(|&d| Mat::zeros(p, d, 0)));
                c
            }
            FunctorTag::JStarUpper => {
                // (f, id): (Y; Y)_1 -> (X; Y)_f
                let t = self.to_triple(m);
                let mut c = t.f.comps.clone();
                c.extend(t.y.dims.iter().map(|&d| Mat::identity(p, d)));
                c
            }
            _ => {
                let id = RepMap::identity(p, m);
                return self.expect_source(id, &source);
            }
        };
        let map = RepMap {
            source,
            target: m.clone(),
            comps,
        };
        self.validate_on(left.target(), &map)?;
        Ok(map)
    }

    fn expect_target(&self, id: RepMap, target: &Rep) -> Result<RepMap> {
        if &id.target != target {
            return Err(Error::EndpointMismatch("unit is not an identity here".into()));
        }
        Ok(id)
    }

    fn expect_source(&self, id: RepMap, source: &Rep) -> Result<RepMap> {
        if &id.source != source {
            return Err(Error::EndpointMismatch("counit is not an identity here".into()));
        }
        Ok(id)
    }

    fn validate_on(&self, side: Side, f: &RepMap) -> Result<()> {
        self.category(side).algebra.validate_map(f)
    }

    /// Image of a conflation under `tag`. Exact functors keep it a conflation;
    /// for `i^*` the image `FA -> FB -> FC` is replaced by `K -> FB -> FC`
    /// with `K = ker(Fg)`, and the factorization `FA -> K` is returned too.
    pub fn transport_conflation(&self, tag: FunctorTag, conf: &Conflation) -> (Conflation, Option<RepMap>) {
        let fi = self.apply_map(tag, &conf.incl);
        let fp = self.apply_map(tag, &conf.proj);
        if tag != FunctorTag::IStarUpper {
            return (Conflation { incl: fi, proj: fp }, None);
        }
        let alg = &self.base.algebra;
        let k = alg.kernel(&fp);
        let h = k.factor(&fi).expect("F f factors through ker F g");
        (
            Conflation {
                incl: k.incl.clone(),
                proj: fp,
            },
            Some(h),
        )
    }

    /// Display name of a triple in the style `X|Y`, `X|X_1`, `X|Y_f`.
    pub fn triple_name(&self, m: &Rep, map_name: &dyn Fn(&str, &str) -> Option<String>) -> String {
        let t = self.to_triple(m);
        let xn = self.base_name(&t.x);
        let yn = self.base_name(&t.y);
        if t.f.is_zero() {
            format!("{xn}|{yn}")
        } else if t.f.is_iso() {
            format!("{xn}|{yn}_1")
        } else {
            let label = map_name(&yn, &xn).unwrap_or_else(|| "f".to_string());
            format!("{xn}|{yn}_{label}")
        }
    }

    fn base_name(&self, r: &Rep) -> String {
        match self.base.decompose_indices(r) {
            Ok(idx) if idx.is_empty() => "0".into(),
            Ok(idx) => idx.iter().map(|&i| self.base.label(i).to_string()).collect::<Vec<_>>().join("+"),
            Err(_) => format!("{:?}", r.dims),
        }
    }

    /// Gives every middle catalog object its triple-style alias.
    pub fn alias_middle(catalog: &mut Catalog, mc: &MorphismCategory, map_name: &dyn Fn(&str, &str) -> Option<String>) {
        for i in 0..catalog.len() {
            let name = mc.triple_name(&catalog.objects[i], map_name);
            catalog.add_alias(i, name);
        }
    }
}

/// A composite of recollement functors, listed in application order.
pub struct Composite<'a> {
    pub mc: &'a MorphismCategory,
    pub tags: Vec<FunctorTag>,
}

impl<'a> Composite<'a> {
    pub fn single(mc: &'a MorphismCategory, tag: FunctorTag) -> Self {
        Composite { mc, tags: vec![tag] }
    }
}

impl Functor for Composite<'_> {
    fn name(&self) -> String {
        self.tags.iter().rev().map(|t| t.symbol()).collect::<Vec<_>>().join("")
    }

    fn obj(&self, m: &Rep) -> Rep {
        self.mc.apply_all(&self.tags, m)
    }

    fn map(&self, f: &RepMap) -> RepMap {
        self.mc.apply_map_all(&self.tags, f)
    }
}

/// Indecomposables of `Mor(A)` among triples `(X; Y)_f` where `X` and `Y` are
/// each sums of at most `caps.multiplicity` base indecomposables.
pub fn morphism_catalog(base: &ModCat, t2: &Algebra, caps: &Caps) -> Catalog {
    let a = &base.algebra;
    let p = a.p();
    let sums = multisets(base.len(), caps.multiplicity);
    let objects: Vec<Rep> = sums
        .iter()
        .map(|ms| {
            let parts: Vec<Rep> = ms.iter().map(|&i| base.object(i).clone()).collect();
            a.direct_sum(&parts).rep
        })
        .collect();
    let mut found = Vec::new();
    let mut caps_hit: Vec<String> = base.catalog.caps_hit.clone();
    for x in &objects {
        for y in &objects {
            if x.is_zero() && y.is_zero() {
                continue;
            }
            let hom = a.hom_space(y, x);
            if space_size(p, hom.dim()) > caps.tuples as u128 {
                caps_hit.push(format!("Hom space of dimension {} skipped in triple enumeration", hom.dim()));
                continue;
            }
            for f in hom.elements() {
                let mut dims = x.dims.clone();
                dims.extend_from_slice(&y.dims);
                let mut mats = x.mats.clone();
                mats.extend(y.mats.iter().cloned());
                mats.extend(f.comps.iter().cloned());
                let rep = Rep { dims, mats };
                t2.consider(rep, &mut found, &mut caps_hit, caps);
            }
        }
    }
    Catalog::from_found(found, caps_hit)
}

/// All multisets of `0..n` of size at most `k`, as sorted index lists.
fn multisets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    let mut frontier = vec![Vec::new()];
    for _ in 0..k {
        let mut next = Vec::new();
        for ms in &frontier {
            let start = ms.last().copied().unwrap_or(0);
            for i in start..n {
                let mut m: Vec<usize> = ms.clone();
                m.push(i);
                next.push(m);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::a2;

    fn setup() -> MorphismCategory {
        let caps = Caps::default();
        let base = Arc::new(ModCat::build(a2(2).unwrap(), caps.clone()));
        MorphismCategory::build(base, &caps).unwrap()
    }

    #[test]
    fn t2_shapes() {
        let a = a2(2).unwrap();
        let b = triangular_matrix_algebra(&a).unwrap();
        assert_eq!(b.vertex_count(), 4);
        assert_eq!(b.arrow_count(), 4);
        assert_eq!(b.relations().len(), 1);
        assert_eq!(b.dim(), 9);

        let q = Quiver::new(vec!["1".into()], vec![]).unwrap();
        let k = Algebra::new(q, vec![], a.field()).unwrap();
        assert_eq!(triangular_matrix_algebra(&k).unwrap().dim(), 3);
    }

    #[test]
    fn eleven_indecomposables() {
        let mc = setup();
        assert_eq!(mc.base.len(), 3);
        assert_eq!(mc.middle.len(), 11);
    }

    #[test]
    fn triple_round_trip() {
        let mc = setup();
        for m in &mc.middle.catalog.objects {
            let t = mc.triple_from_rep(m).unwrap();
            assert_eq!(&mc.from_triple(&t), m);
        }
    }

    #[test]
    fn functor_values() {
        let mc = setup();
        let a = &mc.base.algebra;
        let (p1, s1, s2) = (a.projective(0), a.simple(0), a.simple(1));
        let phi = a.hom_basis(&s2, &p1).remove(0);
        let m = mc.from_triple(&Triple {
            x: p1.clone(),
            y: s2.clone(),
            f: phi.clone(),
        });
        assert_eq!(m.dims, vec![1, 1, 0, 1]);
        assert_eq!(mc.apply(FunctorTag::IStarUpper, &m), {
            let q = a.cokernel(&phi);
            q.rep
        });
        assert_eq!(mc.apply(FunctorTag::IStarUpper, &m).dims, s1.dims);
        let jp = mc.apply(FunctorTag::JShriek, &p1);
        assert_eq!(jp.dims, vec![1, 1, 1, 1]);
        let eps = mc.counit(FunctorTag::JShriek, FunctorTag::JStarUpper, &m).unwrap();
        assert_eq!(eps.comps[..2], phi.comps[..]);
    }

    #[test]
    fn units_and_counits_are_morphisms() {
        let mc = setup();
        for (l, r) in ADJUNCTIONS {
            let (src_side, mid_side) = (l.source(), r.source());
            for m in &mc.category(src_side).catalog.objects {
                mc.unit(l, r, m).unwrap();
            }
            for m in &mc.category(mid_side).catalog.objects {
                mc.counit(l, r, m).unwrap();
            }
        }
        let s = &mc.middle.catalog.objects[0];
        assert!(matches!(
            mc.unit(FunctorTag::JShriek, FunctorTag::IShriek, s),
            Err(Error::NotAdjoint(_, _))
        ));
    }

    #[test]
    fn multiset_counts() {
        assert_eq!(multisets(3, 2).len(), 10);
        assert_eq!(multisets(2, 0), vec![Vec::<usize>::new()]);
    }
}
