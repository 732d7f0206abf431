//! Extension-closed subcategories of a module category and the
//! extriangulated structure they inherit: inflations, deflations, left and
//! right exact sequences, (ET3)/(ET4) diagrams and exactness of functors.

use std::collections::BTreeSet;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::Algebra;
use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::exactlin::{space_size, VectorIter};
use crate::repcat::{Conflation, ModCat, Rep, RepMap};
use crate::verdict::{Status, Verdict, Witness};

/// The additive closure of a set of catalog indecomposables. Equality and
/// hashing look at the indecomposables only.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Subcat {
    pub indecs: BTreeSet<usize>,
    /// Set when the subcategory is the whole ambient category.
    #[serde(default)]
    pub full: bool,
}

impl PartialEq for Subcat {
    fn eq(&self, other: &Self) -> bool {
        self.indecs == other.indecs
    }
}

impl Eq for Subcat {}

impl std::hash::Hash for Subcat {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.indecs.hash(state);
    }
}

impl Subcat {
    pub fn full(n: usize) -> Self {
        Subcat {
            indecs: (0..n).collect(),
            full: true,
        }
    }

    pub fn of<I: IntoIterator<Item = usize>>(items: I) -> Self {
        Subcat {
            indecs: items.into_iter().collect(),
            full: false,
        }
    }

    pub fn empty() -> Self {
        Subcat::of([])
    }

    pub fn contains(&self, i: usize) -> bool {
        self.full || self.indecs.contains(&i)
    }

    pub fn contains_all(&self, idx: &[usize]) -> bool {
        idx.iter().all(|&i| self.contains(i))
    }

    pub fn len(&self) -> usize {
        self.indecs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indecs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.indecs.iter().copied()
    }

    pub fn is_subset(&self, other: &Subcat) -> bool {
        self.indecs.iter().all(|&i| other.contains(i))
    }
}

/// An extension-closed subcategory (the carrier) of a module category.
#[derive(Clone, Debug)]
pub struct ExCat {
    pub cat: Arc<ModCat>,
    pub carrier: Subcat,
}

impl ExCat {
    pub fn new(cat: Arc<ModCat>, carrier: Subcat) -> Self {
        ExCat { cat, carrier }
    }

    pub fn full(cat: Arc<ModCat>) -> Self {
        let n = cat.len();
        ExCat {
            cat,
            carrier: Subcat::full(n),
        }
    }

    pub fn algebra(&self) -> &Algebra {
        &self.cat.algebra
    }

    pub fn caps(&self) -> &Caps {
        &self.cat.caps
    }

    pub fn p(&self) -> u32 {
        self.cat.p()
    }

    pub fn indices(&self) -> Vec<usize> {
        self.carrier.iter().collect()
    }

    pub fn label(&self, i: usize) -> &str {
        self.cat.label(i)
    }

    /// Whether `m` lies in the carrier.
    pub fn member(&self, m: &Rep) -> Result<bool> {
        if self.carrier.full && self.cat.catalog.is_complete() {
            return Ok(true);
        }
        self.member_of(&self.carrier, m)
    }

    /// Whether `m` lies in the additive closure of `sub`.
    pub fn member_of(&self, sub: &Subcat, m: &Rep) -> Result<bool> {
        let idx = self.cat.decompose_indices(m)?;
        Ok(sub.contains_all(&idx))
    }

    pub fn describe(&self, m: &Rep) -> String {
        self.cat.describe(m)
    }

    /// Carrier indecomposables `P` with `Ext¹(P, K) = 0` for every carrier `K`.
    pub fn projectives(&self) -> Vec<usize> {
        let ext = self.cat.ext_table();
        self.carrier
            .iter()
            .filter(|&i| self.carrier.iter().all(|k| ext[i][k] == 0))
            .collect()
    }

    pub fn injectives(&self) -> Vec<usize> {
        let ext = self.cat.ext_table();
        self.carrier
            .iter()
            .filter(|&i| self.carrier.iter().all(|k| ext[k][i] == 0))
            .collect()
    }

    pub fn is_inflation(&self, f: &RepMap) -> Result<bool> {
        if !f.is_injective() {
            return Ok(false);
        }
        self.member(&self.algebra().cokernel(f).rep)
    }

    pub fn is_deflation(&self, f: &RepMap) -> Result<bool> {
        if !f.is_surjective() {
            return Ok(false);
        }
        self.member(&self.algebra().kernel(f).rep)
    }

    pub fn classify_morphism(&self, f: &RepMap) -> Result<MorphismClass> {
        let inflation = self.is_inflation(f)?;
        let deflation = self.is_deflation(f)?;
        let iso = f.is_iso();
        Ok(MorphismClass {
            inflation,
            deflation,
            compatible: !(inflation && deflation) || iso,
            iso,
        })
    }

    pub fn is_compatible(&self, f: &RepMap) -> Result<bool> {
        Ok(self.classify_morphism(f)?.compatible)
    }

    /// Named witness object using catalog labels where possible.
    pub fn witness_object(&self, w: Witness, role: &str, m: &Rep) -> Witness {
        w.with_object(format!("{role} = {}", self.describe(m)), m)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphismClass {
    pub inflation: bool,
    pub deflation: bool,
    pub compatible: bool,
    pub iso: bool,
}

/// Which half of exactness a sequence or functor is checked for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Left,
    Right,
}

impl Mode {
    pub fn parse(s: &str) -> Result<Mode> {
        match s {
            "exact" => Ok(Mode::Exact),
            "left" => Ok(Mode::Left),
            "right" => Ok(Mode::Right),
            other => Err(Error::UnknownName(format!("mode {other}"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Mode::Exact => "exact",
            Mode::Left => "left",
            Mode::Right => "right",
        }
    }
}

fn or_unknown(r: Result<Verdict>) -> Verdict {
    r.unwrap_or_else(|e| Verdict::from_error(&e))
}

/// Coordinates of the Ext classes swept in `F_p^dim`. Small groups are swept
/// completely; larger ones by basis vectors, pairwise sums and seeded samples.
pub fn ext_classes(p: u32, dim: usize, caps: &Caps, include_zero: bool) -> (Vec<Vec<u32>>, bool) {
    if space_size(p, dim) <= caps.ext_sweep as u128 {
        let all = VectorIter::new(p, dim)
            .filter(|v| include_zero || v.iter().any(|&c| c != 0))
            .collect();
        return (all, true);
    }
    let mut out: Vec<Vec<u32>> = Vec::new();
    if include_zero {
        out.push(vec![0; dim]);
    }
    for i in 0..dim {
        let mut v = vec![0; dim];
        v[i] = 1;
        out.push(v);
    }
    for i in 0..dim {
        for j in i + 1..dim {
            let mut v = vec![0; dim];
            v[i] = 1;
            v[j] = 1;
            out.push(v);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(caps.seed);
    for _ in 0..caps.ext_sweep.min(256) {
        let v: Vec<u32> = (0..dim).map(|_| rand::Rng::gen_range(&mut rng, 0..p)).collect();
        if !out.contains(&v) {
            out.push(v);
        }
    }
    (out, false)
}

/// Every realized conflation `A -> B -> C` between carrier indecomposables,
/// as `(c, a, class, conflation)`.
pub fn carrier_conflations(x: &ExCat, include_zero: bool) -> (Vec<(usize, usize, Vec<u32>, Conflation)>, bool) {
    let mut out = Vec::new();
    let mut exhaustive = true;
    for c in x.carrier.iter() {
        for a in x.carrier.iter() {
            let space = x.cat.ext_space_of(c, a);
            let (classes, full) = ext_classes(x.p(), space.dim(), x.caps(), include_zero);
            exhaustive &= full;
            for cls in classes {
                let conf = x.algebra().ext_to_conflation(&space, &cls);
                out.push((c, a, cls, conf));
            }
        }
    }
    (out, exhaustive)
}

fn sampling_note(v: Verdict, exhaustive: bool) -> Verdict {
    if exhaustive || v.status != Status::Holds {
        return v;
    }
    Verdict::unknown("ext_sweep: large Ext groups were sampled")
}

pub fn check_extension_closed(x: &ExCat) -> Verdict {
    or_unknown(extension_closed_inner(x))
}

fn extension_closed_inner(x: &ExCat) -> Result<Verdict> {
    let mut exhaustive = true;
    for c in x.carrier.iter() {
        for a in x.carrier.iter() {
            let space = x.cat.ext_space_of(c, a);
            let (classes, full) = ext_classes(x.p(), space.dim(), x.caps(), false);
            exhaustive &= full;
            for cls in classes {
                let conf = x.algebra().ext_to_conflation(&space, &cls);
                if !x.member(conf.middle())? {
                    let w = Witness::new(format!(
                        "the extension {cls:?} of {} by {} has middle term {} outside the subcategory",
                        x.label(c),
                        x.label(a),
                        x.describe(conf.middle())
                    ))
                    .with_object("C", x.cat.object(c))
                    .with_object("A", x.cat.object(a))
                    .with_object("B", conf.middle());
                    return Ok(Verdict::fails(w));
                }
            }
        }
    }
    Ok(sampling_note(Verdict::holds(), exhaustive))
}

/// `A -f-> B -g-> C` is a conflation in the carrier.
pub fn is_conflation(x: &ExCat, f: &RepMap, g: &RepMap) -> Verdict {
    or_unknown(conflation_inner(x, f, g))
}

fn conflation_inner(x: &ExCat, f: &RepMap, g: &RepMap) -> Result<Verdict> {
    let conf = Conflation {
        incl: f.clone(),
        proj: g.clone(),
    };
    if !conf.is_exact() {
        return Ok(Verdict::fails(sequence_witness(x, "the sequence is not short exact", f, g)));
    }
    for (role, m) in [("A", f.source.clone()), ("B", f.target.clone()), ("C", g.target.clone())] {
        if !x.member(&m)? {
            return Ok(Verdict::fails(x.witness_object(
                Witness::new(format!("term {role} lies outside the subcategory")),
                role,
                &m,
            )));
        }
    }
    Ok(Verdict::holds())
}

fn sequence_witness(x: &ExCat, msg: &str, f: &RepMap, g: &RepMap) -> Witness {
    let w = Witness::new(msg);
    let w = x.witness_object(w, "A", &f.source);
    let w = x.witness_object(w, "B", &f.target);
    x.witness_object(w, "C", &g.target).with_map("f", f).with_map("g", g)
}

/// Right exactness of `A -f-> B -g-> C`: `K = ker g`, `f = h₂h₁` with `h₁`
/// a compatible deflation.
pub fn right_exact(x: &ExCat, f: &RepMap, g: &RepMap) -> Verdict {
    or_unknown(right_exact_inner(x, f, g))
}

fn right_exact_inner(x: &ExCat, f: &RepMap, g: &RepMap) -> Result<Verdict> {
    let alg = x.algebra();
    if !x.is_deflation(g)? {
        return Ok(Verdict::fails(sequence_witness(x, "g is not a deflation", f, g)));
    }
    if !g.after(f).is_zero() {
        return Ok(Verdict::fails(sequence_witness(x, "g f is not zero", f, g)));
    }
    let k = alg.kernel(g);
    let h1 = k.factor(f).expect("f lands in ker g");
    let cls = x.classify_morphism(&h1)?;
    if !cls.deflation {
        let w = sequence_witness(x, "A -> ker g is not a deflation", f, g);
        return Ok(Verdict::fails(x.witness_object(w, "K", &k.rep)));
    }
    if !cls.compatible {
        return Ok(Verdict::fails(sequence_witness(x, "A -> ker g is not compatible", f, g)));
    }
    Ok(Verdict::holds())
}

/// Left exactness of `A -f-> B -g-> C`: `K = coker f`, `g = h₂h₁` with `h₂`
/// a compatible inflation.
pub fn left_exact(x: &ExCat, f: &RepMap, g: &RepMap) -> Verdict {
    or_unknown(left_exact_inner(x, f, g))
}

fn left_exact_inner(x: &ExCat, f: &RepMap, g: &RepMap) -> Result<Verdict> {
    let alg = x.algebra();
    if !x.is_inflation(f)? {
        return Ok(Verdict::fails(sequence_witness(x, "f is not an inflation", f, g)));
    }
    if !g.after(f).is_zero() {
        return Ok(Verdict::fails(sequence_witness(x, "g f is not zero", f, g)));
    }
    let q = alg.cokernel(f);
    let h2 = q.induce(g);
    let cls = x.classify_morphism(&h2)?;
    if !cls.inflation {
        let w = sequence_witness(x, "coker f -> C is not an inflation", f, g);
        return Ok(Verdict::fails(x.witness_object(w, "K", &q.rep)));
    }
    if !cls.compatible {
        return Ok(Verdict::fails(sequence_witness(x, "coker f -> C is not compatible", f, g)));
    }
    Ok(Verdict::holds())
}

pub fn exact_sequence_check(x: &ExCat, f: &RepMap, g: &RepMap, mode: Mode) -> Verdict {
    match mode {
        Mode::Left => left_exact(x, f, g),
        Mode::Right => right_exact(x, f, g),
        Mode::Exact => is_conflation(x, f, g),
    }
}

/// A four-term sequence `A -f-> B -g-> C -h-> D` splits as conflations
/// `A -> B -> K` and `K -> C -> D` with `K = coker f`; the left (right) version
/// asks the map `K -> C` (`B -> K`) to be compatible.
pub fn four_term_check(x: &ExCat, f: &RepMap, g: &RepMap, h: &RepMap, mode: Mode) -> Verdict {
    or_unknown(four_term_inner(x, f, g, h, mode))
}

fn four_term_inner(x: &ExCat, f: &RepMap, g: &RepMap, h: &RepMap, mode: Mode) -> Result<Verdict> {
    let alg = x.algebra();
    let fail = |msg: &str| {
        let w = sequence_witness(x, msg, f, g);
        Verdict::fails(x.witness_object(w.with_map("h", h), "D", &h.target))
    };
    if !g.after(f).is_zero() || !h.after(g).is_zero() {
        return Ok(fail("consecutive maps do not compose to zero"));
    }
    let q = alg.cokernel(f);
    let first = is_conflation(x, f, &q.proj);
    if !first.is_holds() {
        if first.status == Status::Unknown {
            return Ok(first);
        }
        return Ok(fail("A -> B -> coker f is not a conflation"));
    }
    let g2 = q.induce(g);
    let second = is_conflation(x, &g2, h);
    if !second.is_holds() {
        if second.status == Status::Unknown {
            return Ok(second);
        }
        return Ok(fail("coker f -> C -> D is not a conflation"));
    }
    let compatible = match mode {
        Mode::Left => x.is_compatible(&g2)?,
        Mode::Right => x.is_compatible(&q.proj)?,
        Mode::Exact => x.is_compatible(&g2)? && x.is_compatible(&q.proj)?,
    };
    if !compatible {
        return Ok(fail("the middle factor is not compatible"));
    }
    Ok(Verdict::holds())
}

/// (ET3): completes `(a, b)` between two conflations to `(a, b, c)`.
#[derive(Clone, Debug)]
pub struct Et3Fill {
    pub c: RepMap,
    /// `a_* δ = c^* δ'` verified in coordinates.
    pub classes_agree: bool,
}

pub fn et3_fill(alg: &Algebra, d1: &Conflation, d2: &Conflation, a: &RepMap, b: &RepMap) -> Result<Et3Fill> {
    if b.after(&d1.incl) != d2.incl.after(a) {
        return Err(Error::NonCommuting("left square of the (ET3) diagram".into()));
    }
    let target = d2.proj.after(b);
    let c = alg
        .factor_through_epi(&d1.proj, &target)
        .ok_or_else(|| Error::NotExact("the square does not descend to the cokernels".into()))?;
    let s1 = alg.ext_space(d1.right(), d1.left());
    let s2 = alg.ext_space(d2.right(), d2.left());
    let delta = alg.conflation_to_ext(&s1, d1)?;
    let delta2 = alg.conflation_to_ext(&s2, d2)?;
    let mixed = alg.ext_space(d1.right(), d2.left());
    let pushed = alg.ext_push(&s1, a, &mixed, &delta);
    let pulled = alg.ext_pull(&s2, &c, &mixed, &delta2);
    Ok(Et3Fill {
        c,
        classes_agree: pushed == pulled,
    })
}

/// The (ET4) octahedron built from `A -f-> B -f'-> D` and `B -g-> C -g'-> F`.
#[derive(Clone, Debug)]
pub struct Et4Diagram {
    pub e: Rep,
    /// `A -h-> C -h'-> E`
    pub first: Conflation,
    /// `D -d-> E -e-> F`
    pub second: Conflation,
    /// Compatibilities (i), (ii), (iii).
    pub certificates: [bool; 3],
}

pub fn et4_compose(alg: &Algebra, delta: &Conflation, delta2: &Conflation) -> Result<Et4Diagram> {
    if delta.middle() != delta2.left() {
        return Err(Error::EndpointMismatch("(ET4) needs the middle of the first conflation to start the second".into()));
    }
    let (f, f1) = (&delta.incl, &delta.proj);
    let (g, g1) = (&delta2.incl, &delta2.proj);
    let h = g.after(f);
    let q = alg.cokernel(&h);
    let h1 = q.proj.clone();
    let d = alg
        .factor_through_epi(f1, &h1.after(g))
        .ok_or_else(|| Error::NotExact("D -> E".into()))?;
    let e = q.induce(g1);
    let first = Conflation { incl: h, proj: h1 };
    let second = Conflation {
        incl: d.clone(),
        proj: e.clone(),
    };
    if !first.is_exact() || !second.is_exact() {
        return Err(Error::NotExact("(ET4) rows".into()));
    }
    let (a, dd, ff, b, ee) = (delta.left(), delta.right(), delta2.right(), delta.middle(), &q.rep);
    let s_delta = alg.ext_space(dd, a);
    let s_delta2 = alg.ext_space(ff, b);
    let s_dd = alg.ext_space(ee, a);
    let x_delta = alg.conflation_to_ext(&s_delta, delta)?;
    let x_delta2 = alg.conflation_to_ext(&s_delta2, delta2)?;
    let x_dd = alg.conflation_to_ext(&s_dd, &first)?;
    // (i) D -> E -> F realizes f'_* δ'
    let s_fd = alg.ext_space(ff, dd);
    let i = alg.conflation_to_ext(&s_fd, &second)? == alg.ext_push(&s_delta2, f1, &s_fd, &x_delta2);
    // (ii) d^* δ'' = δ
    let ii = alg.ext_pull(&s_dd, &d, &s_delta, &x_dd) == x_delta;
    // (iii) f_* δ'' = e^* δ'
    let s_eb = alg.ext_space(ee, b);
    let iii = alg.ext_push(&s_dd, f, &s_eb, &x_dd) == alg.ext_pull(&s_delta2, &e, &s_eb, &x_delta2);
    Ok(Et4Diagram {
        e: q.rep.clone(),
        first,
        second,
        certificates: [i, ii, iii],
    })
}

/// An additive functor between module categories, acting on objects and maps.
pub trait Functor {
    fn name(&self) -> String;
    fn obj(&self, m: &Rep) -> Rep;
    fn map(&self, f: &RepMap) -> RepMap;
}

/// Sweeps realized conflations between carrier indecomposables and checks
/// that their images are exact in the requested sense, plus preservation of
/// compatible morphisms on Hom bases.
pub fn functor_exactness(func: &dyn Functor, mode: Mode, src: &ExCat, tgt: &ExCat) -> Verdict {
    or_unknown(functor_exactness_inner(func, mode, src, tgt))
}

fn functor_exactness_inner(func: &dyn Functor, mode: Mode, src: &ExCat, tgt: &ExCat) -> Result<Verdict> {
    for i in src.carrier.iter() {
        let img = func.obj(src.cat.object(i));
        if !tgt.member(&img)? {
            let w = Witness::new(format!(
                "{} sends {} to {}, outside the target subcategory",
                func.name(),
                src.label(i),
                tgt.describe(&img)
            ))
            .with_object("image", &img);
            return Ok(Verdict::fails(w));
        }
    }
    let mut exhaustive = true;
    for c in src.carrier.iter() {
        for a in src.carrier.iter() {
            let space = src.cat.ext_space_of(c, a);
            let (classes, full) = ext_classes(src.p(), space.dim(), src.caps(), true);
            exhaustive &= full;
            for cls in classes {
                let conf = src.algebra().ext_to_conflation(&space, &cls);
                let ff = func.map(&conf.incl);
                let fg = func.map(&conf.proj);
                let v = exact_sequence_check(tgt, &ff, &fg, mode);
                match v.status {
                    Status::Holds | Status::Skipped => {}
                    Status::Unknown => return Ok(v),
                    _ => {
                        let mut w = Witness::new(format!(
                            "{} applied to the conflation {} -> {} -> {} (class {cls:?}) is not {}: {}",
                            func.name(),
                            src.label(a),
                            src.describe(conf.middle()),
                            src.label(c),
                            match mode {
                                Mode::Exact => "exact".to_string(),
                                m => format!("{} exact", m.name()),
                            },
                            v.witness.as_ref().map(|w| w.message.as_str()).unwrap_or("")
                        ));
                        w = w
                            .with_object("A", conf.left())
                            .with_object("B", conf.middle())
                            .with_object("C", conf.right())
                            .with_map("f", &conf.incl)
                            .with_map("g", &conf.proj);
                        return Ok(Verdict::fails(w));
                    }
                }
            }
        }
    }
    let hom_cap = src.caps().hom_sweep;
    for i in src.carrier.iter() {
        for j in src.carrier.iter() {
            let hom = src.algebra().hom_space(src.cat.object(i), src.cat.object(j));
            let maps: Vec<RepMap> = if space_size(src.p(), hom.dim()) <= hom_cap as u128 {
                hom.elements().collect()
            } else {
                exhaustive = false;
                hom.basis.clone()
            };
            for m in maps {
                if src.is_compatible(&m)? && !tgt.is_compatible(&func.map(&m))? {
                    let w = Witness::new(format!(
                        "{} does not preserve compatibility of a map {} -> {}",
                        func.name(),
                        src.label(i),
                        src.label(j)
                    ))
                    .with_map("f", &m);
                    return Ok(Verdict::fails(w));
                }
            }
        }
    }
    Ok(sampling_note(Verdict::holds(), exhaustive))
}

/// Left and right exactness together must give exactness.
pub fn exactness_coherence(func: &dyn Functor, src: &ExCat, tgt: &ExCat) -> Verdict {
    let l = functor_exactness(func, Mode::Left, src, tgt);
    let r = functor_exactness(func, Mode::Right, src, tgt);
    let e = functor_exactness(func, Mode::Exact, src, tgt);
    if l.is_holds() && r.is_holds() && e.status == Status::Fails {
        let mut w = Witness::new(format!("{} is left and right exact but not exact", func.name()));
        if let Some(inner) = e.witness {
            w.message = format!("{}: {}", w.message, inner.message);
        }
        return Verdict::inconsistent(w);
    }
    if [&l, &r, &e].iter().any(|v| v.status == Status::Unknown) {
        return Verdict::unknown("exactness sweep");
    }
    Verdict::holds()
}

/// (WIC) on a deterministic sample of composable pairs of maps between
/// carrier indecomposables.
pub fn wic_spot_check(x: &ExCat) -> Verdict {
    or_unknown(wic_inner(x))
}

fn wic_inner(x: &ExCat) -> Result<Verdict> {
    let alg = x.algebra();
    let idx = x.indices();
    let mut pairs = Vec::new();
    for &i in &idx {
        for &j in &idx {
            let f_basis = alg.hom_basis(x.cat.object(i), x.cat.object(j));
            if f_basis.is_empty() {
                continue;
            }
            for &k in &idx {
                let g_basis = alg.hom_basis(x.cat.object(j), x.cat.object(k));
                for f in &f_basis {
                    for g in &g_basis {
                        pairs.push((f.clone(), g.clone()));
                    }
                }
            }
            // identities exercise the degenerate cases
            let id = RepMap::identity(x.p(), x.cat.object(j));
            for f in &f_basis {
                pairs.push((f.clone(), id.clone()));
            }
        }
    }
    if pairs.len() > x.caps().wic_sample {
        let mut rng = ChaCha8Rng::seed_from_u64(x.caps().seed);
        pairs.shuffle(&mut rng);
        pairs.truncate(x.caps().wic_sample);
    }
    for (f, g) in &pairs {
        let gf = g.after(f);
        if x.is_inflation(&gf)? && !x.is_inflation(f)? {
            return Ok(Verdict::fails(Witness::new("g f is an inflation but f is not").with_map("f", f).with_map("g", g)));
        }
        if x.is_deflation(&gf)? && !x.is_deflation(g)? {
            return Ok(Verdict::fails(Witness::new("g f is a deflation but g is not").with_map("f", f).with_map("g", g)));
        }
        let cls = x.classify_morphism(f)?;
        if cls.inflation && cls.deflation && !cls.iso {
            return Ok(Verdict::inconsistent(
                Witness::new("a non-isomorphism is both an inflation and a deflation").with_map("f", f),
            ));
        }
    }
    Ok(Verdict::holds())
}

/// The long exact Hom–Ext sequences of every realized conflation, tested
/// against every carrier indecomposable by rank bookkeeping.
pub fn hom_ext_exactness(x: &ExCat) -> Verdict {
    or_unknown(hom_ext_inner(x))
}

fn rank_exact(first: &crate::exactlin::Mat, second: &crate::exactlin::Mat) -> bool {
    // exact at the middle space: second∘first = 0 and rank first = dim ker second
    let mid = second.cols();
    second.mul(first).is_zero() && first.rank() == mid - second.rank()
}

fn hom_ext_inner(x: &ExCat) -> Result<Verdict> {
    use crate::exactlin::Mat;
    let alg = x.algebra();
    let p = x.p();
    let (confs, exhaustive) = carrier_conflations(x, true);
    for (c, a, cls, conf) in &confs {
        let (ao, bo, co) = (conf.left(), conf.middle(), conf.right());
        let delta_space = x.cat.ext_space_of(*c, *a);
        for xi in x.carrier.iter() {
            let xo = x.cat.object(xi);
            // contravariant: Hom(C,X) -> Hom(B,X) -> Hom(A,X) -> Ext(C,X) -> Ext(B,X)
            let h_c = alg.hom_space(co, xo);
            let h_b = alg.hom_space(bo, xo);
            let h_a = alg.hom_space(ao, xo);
            let e_c = alg.ext_space(co, xo);
            let e_b = alg.ext_space(bo, xo);
            let m1 = Mat::from_columns(p, h_b.dim(), &h_c.basis.iter().map(|h| h_b.coords(&h.after(&conf.proj)).unwrap()).collect::<Vec<_>>());
            let m2 = Mat::from_columns(p, h_a.dim(), &h_b.basis.iter().map(|h| h_a.coords(&h.after(&conf.incl)).unwrap()).collect::<Vec<_>>());
            let m3 = Mat::from_columns(p, e_c.dim(), &h_a.basis.iter().map(|h| alg.ext_push(&delta_space, h, &e_c, cls)).collect::<Vec<_>>());
            let m4 = Mat::from_columns(
                p,
                e_b.dim(),
                &(0..e_c.dim()).map(|k| alg.ext_pull(&e_c, &conf.proj, &e_b, &unit(e_c.dim(), k))).collect::<Vec<_>>(),
            );
            let ok = m1.rank() == h_c.dim() && rank_exact(&m1, &m2) && rank_exact(&m2, &m3) && rank_exact(&m3, &m4);
            if !ok {
                let w = Witness::new(format!(
                    "Hom(-, {}) sequence of {} -> {} -> {} is not exact",
                    x.label(xi),
                    x.label(*a),
                    x.describe(bo),
                    x.label(*c)
                ));
                return Ok(Verdict::inconsistent(w));
            }
            // covariant: Hom(X,A) -> Hom(X,B) -> Hom(X,C) -> Ext(X,A) -> Ext(X,B)
            let k_a = alg.hom_space(xo, ao);
            let k_b = alg.hom_space(xo, bo);
            let k_c = alg.hom_space(xo, co);
            let f_a = alg.ext_space(xo, ao);
            let f_b = alg.ext_space(xo, bo);
            let n1 = Mat::from_columns(p, k_b.dim(), &k_a.basis.iter().map(|h| k_b.coords(&conf.incl.after(h)).unwrap()).collect::<Vec<_>>());
            let n2 = Mat::from_columns(p, k_c.dim(), &k_b.basis.iter().map(|h| k_c.coords(&conf.proj.after(h)).unwrap()).collect::<Vec<_>>());
            let n3 = Mat::from_columns(p, f_a.dim(), &k_c.basis.iter().map(|h| alg.ext_pull(&delta_space, h, &f_a, cls)).collect::<Vec<_>>());
            let n4 = Mat::from_columns(
                p,
                f_b.dim(),
                &(0..f_a.dim()).map(|k| alg.ext_push(&f_a, &conf.incl, &f_b, &unit(f_a.dim(), k))).collect::<Vec<_>>(),
            );
            let ok = n1.rank() == k_a.dim() && rank_exact(&n1, &n2) && rank_exact(&n2, &n3) && rank_exact(&n3, &n4);
            if !ok {
                let w = Witness::new(format!(
                    "Hom({}, -) sequence of {} -> {} -> {} is not exact",
                    x.label(xi),
                    x.label(*a),
                    x.describe(bo),
                    x.label(*c)
                ));
                return Ok(Verdict::inconsistent(w));
            }
        }
    }
    Ok(sampling_note(Verdict::holds(), exhaustive))
}

fn unit(n: usize, k: usize) -> Vec<u32> {
    let mut v = vec![0; n];
    v[k] = 1;
    v
}

/// Round trip class -> conflation -> class on every swept class.
pub fn ext_round_trip(x: &ExCat) -> Verdict {
    or_unknown((|| {
        let alg = x.algebra();
        let (confs, exhaustive) = carrier_conflations(x, true);
        for (c, a, cls, conf) in &confs {
            let space = x.cat.ext_space_of(*c, *a);
            let back = alg.conflation_to_ext(&space, conf)?;
            if &back != cls || !conf.is_exact() {
                return Ok(Verdict::inconsistent(Witness::new(format!(
                    "class {cls:?} of Ext¹({}, {}) came back as {back:?}",
                    x.label(*c),
                    x.label(*a)
                ))));
            }
            if cls.iter().all(|&v| v == 0) && x.cat.decompose_indices(conf.middle())? != {
                let mut both = vec![*a, *c];
                both.sort_unstable();
                both
            } {
                return Ok(Verdict::inconsistent(Witness::new("the zero class does not split")));
            }
        }
        Ok(sampling_note(Verdict::holds(), exhaustive))
    })())
}

/// (ET4) certificates for every nonzero realized `δ` between carrier
/// indecomposables followed by every class `δ'` in `Ext¹(F, B)`.
pub fn et4_sweep(x: &ExCat) -> Verdict {
    or_unknown((|| {
        let alg = x.algebra();
        let (confs, mut exhaustive) = carrier_conflations(x, false);
        let mut count = 0usize;
        for (_, _, _, delta) in &confs {
            for fi in x.carrier.iter() {
                let space = alg.ext_space(x.cat.object(fi), delta.middle());
                let (classes, full) = ext_classes(x.p(), space.dim(), x.caps(), true);
                exhaustive &= full;
                for cls in classes {
                    let delta2 = alg.ext_to_conflation(&space, &cls);
                    let diag = et4_compose(alg, delta, &delta2)?;
                    count += 1;
                    if let Some(k) = diag.certificates.iter().position(|&b| !b) {
                        let w = Witness::new(format!("(ET4) compatibility {} fails", ["(i)", "(ii)", "(iii)"][k]))
                            .with_object("A", delta.left())
                            .with_object("B", delta.middle())
                            .with_object("F", x.cat.object(fi));
                        return Ok(Verdict::inconsistent(w));
                    }
                }
            }
        }
        let v = sampling_note(Verdict::holds_with(Witness::new(format!("{count} diagrams checked"))), exhaustive);
        Ok(v)
    })())
}

impl Algebra {
    /// `d` with `d ∘ epi = h`, when `h` vanishes on the kernel of `epi`.
    pub fn factor_through_epi(&self, epi: &RepMap, h: &RepMap) -> Option<RepMap> {
        let comps = epi
            .comps
            .iter()
            .zip(&h.comps)
            .map(|(e, m)| e.transpose().solve_matrix(&m.transpose()).map(|t| t.transpose()))
            .collect::<Option<Vec<_>>>()?;
        let d = RepMap {
            source: epi.target.clone(),
            target: h.target.clone(),
            comps,
        };
        (d.after(epi) == *h).then_some(d)
    }

    /// `x` with `mono ∘ x = h`, when the image of `h` lies in that of `mono`.
    pub fn factor_through_mono(&self, mono: &RepMap, h: &RepMap) -> Option<RepMap> {
        let comps = mono
            .comps
            .iter()
            .zip(&h.comps)
            .map(|(m, t)| m.solve_matrix(t))
            .collect::<Option<Vec<_>>>()?;
        let x = RepMap {
            source: h.source.clone(),
            target: mono.source.clone(),
            comps,
        };
        (mono.after(&x) == *h).then_some(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::a2;

    fn mod_a() -> ExCat {
        ExCat::full(Arc::new(ModCat::build(a2(2).unwrap(), Caps::default())))
    }

    fn idx(x: &ExCat, dims: &[usize]) -> usize {
        (0..x.cat.len()).find(|&i| x.cat.object(i).dims == dims).unwrap()
    }

    #[test]
    fn extension_closure_in_a2() {
        let x = mod_a();
        assert!(check_extension_closed(&x).is_holds());
        let s = Subcat::of([idx(&x, &[1, 0]), idx(&x, &[0, 1])]);
        let y = ExCat::new(x.cat.clone(), s);
        let v = check_extension_closed(&y);
        assert_eq!(v.status, Status::Fails);
        let w = v.witness.unwrap();
        assert_eq!(w.objects[2].rep.dims, vec![1, 1]);
    }

    #[test]
    fn phi_is_an_inflation() {
        let x = mod_a();
        let alg = x.algebra();
        let phi = alg.hom_basis(&alg.simple(1), &alg.projective(0)).remove(0);
        let c = x.classify_morphism(&phi).unwrap();
        assert_eq!(
            c,
            MorphismClass {
                inflation: true,
                deflation: false,
                compatible: true,
                iso: false
            }
        );
        let id = RepMap::identity(2, &alg.projective(0));
        let c = x.classify_morphism(&id).unwrap();
        assert!(c.inflation && c.deflation && c.compatible && c.iso);
    }

    #[test]
    fn conflations_are_left_and_right_exact() {
        let x = mod_a();
        let (confs, _) = carrier_conflations(&x, true);
        for (_, _, _, conf) in confs {
            assert!(left_exact(&x, &conf.incl, &conf.proj).is_holds());
            assert!(right_exact(&x, &conf.incl, &conf.proj).is_holds());
        }
    }

    #[test]
    fn non_epi_is_not_right_exact() {
        let x = mod_a();
        let alg = x.algebra();
        let s2 = alg.simple(1);
        let p1 = alg.projective(0);
        let phi = alg.hom_basis(&s2, &p1).remove(0);
        let z = alg.zero_rep();
        let zero = RepMap::zero(2, &z, &s2);
        assert_eq!(right_exact(&x, &zero, &phi).status, Status::Fails);
    }

    #[test]
    fn et3_identity_fill() {
        let x = mod_a();
        let alg = x.algebra();
        let space = alg.ext_space(&alg.simple(0), &alg.simple(1));
        let conf = alg.ext_to_conflation(&space, &[1]);
        let ida = RepMap::identity(2, conf.left());
        let idb = RepMap::identity(2, conf.middle());
        let fill = et3_fill(alg, &conf, &conf, &ida, &idb).unwrap();
        assert!(fill.c.is_iso() && fill.classes_agree);
        let zb = RepMap::zero(2, conf.middle(), conf.middle());
        let za = RepMap::zero(2, conf.left(), conf.left());
        let fill = et3_fill(alg, &conf, &conf, &za, &zb).unwrap();
        assert!(fill.c.is_zero() && fill.classes_agree);
    }

    #[test]
    fn et4_with_split_second() {
        let x = mod_a();
        let alg = x.algebra();
        let space = alg.ext_space(&alg.simple(0), &alg.simple(1));
        let delta = alg.ext_to_conflation(&space, &[1]);
        let split = alg.split_conflation(delta.middle(), &alg.simple(0));
        let diag = et4_compose(alg, &delta, &split).unwrap();
        assert_eq!(diag.certificates, [true, true, true]);
    }

    #[test]
    fn property_suites_in_a2() {
        let x = mod_a();
        assert!(hom_ext_exactness(&x).is_holds());
        assert!(ext_round_trip(&x).is_holds());
        assert!(et4_sweep(&x).is_holds());
        assert!(wic_spot_check(&x).is_holds());
    }
}
