//! A loaded scenario: algebra, catalogs (possibly from cache), aliases,
//! carriers and the recollement wiring.

use std::collections::BTreeMap;
use std::sync::Arc;

use extricat_core::morphcat::{morphism_catalog, triangular_matrix_algebra, FunctorTag, MorphismCategory, Side};
use extricat_core::recollement::RecollementScenario;
use extricat_core::{Algebra, Caps, Catalog, ExCat, Field, ModCat, Quiver, Relation, Subcat};

use crate::cache::{self, CacheDoc, CachedCategory};
use crate::error::CliError;
use crate::scenario::{parse_relation, split_list, AliasTarget, Ambient, Construction, Scenario};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CacheMode {
    Use,
    Off,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CacheStatus {
    Disabled,
    Hit,
    Written,
}

pub struct World {
    pub scenario: Scenario,
    pub hash: String,
    pub base: Arc<ModCat>,
    pub mc: Option<Arc<MorphismCategory>>,
    pub rec: Option<RecollementScenario>,
    /// The scenario's own category: the middle one when there is a morphism category.
    pub main: ExCat,
    pub cache: CacheStatus,
}

pub fn build_algebra(scenario: &Scenario) -> Result<Algebra, CliError> {
    let spec = &scenario.algebra;
    let quiver = Quiver::new(spec.vertices.clone(), spec.arrows.clone())?;
    let field = Field::new(spec.field)?;
    let p = spec.field as i64;
    let mut rels = Vec::new();
    for text in &spec.relations {
        let terms = parse_relation(text).map_err(|m| CliError::Usage(format!("relation `{text}`: {m}")))?;
        let mut out = Vec::new();
        for (c, path) in terms {
            let idx = path.iter().map(|a| quiver.arrow(a)).collect::<Result<Vec<_>, _>>()?;
            out.push((c.rem_euclid(p) as u32, idx));
        }
        rels.push(Relation::new(out));
    }
    Ok(Algebra::new(quiver, rels, field)?)
}

fn bounds_for(caps: &Caps, alg: &Algebra) -> Vec<usize> {
    if caps.bounds.is_empty() {
        vec![2; alg.vertex_count()]
    } else {
        caps.bounds.clone()
    }
}

fn cached(cat: &ModCat) -> CachedCategory {
    CachedCategory {
        catalog: cat.catalog.clone(),
        hom: cat.hom_table(),
        ext: cat.ext_table(),
    }
}

/// Fresh catalogs, ignoring any cache.
pub fn compute_catalogs(scenario: &Scenario, alg: &Algebra) -> Result<(Catalog, Option<Catalog>), CliError> {
    let caps = &scenario.caps;
    let bounds = bounds_for(caps, alg);
    if bounds.len() != alg.vertex_count() {
        return Err(CliError::Usage("bounds must list one entry per vertex".into()));
    }
    let base = alg.enumerate_indecomposables(&bounds, caps);
    let middle = match scenario.construction.ambient() {
        Ambient::Modules => None,
        Ambient::MorphismCategory => {
            let cat = ModCat::new(alg.clone(), base.clone(), caps.clone());
            let t2 = triangular_matrix_algebra(alg)?;
            Some(morphism_catalog(&cat, &t2, caps))
        }
    };
    Ok((base, middle))
}

fn catalogs(scenario: &Scenario, alg: &Algebra, mode: CacheMode) -> Result<(Catalog, Option<Catalog>, CacheStatus), CliError> {
    let ambient = scenario.construction.ambient();
    let key = cache::cache_key(&scenario.algebra, ambient, &scenario.caps);
    let dir = cache::cache_dir();
    if mode == CacheMode::Use {
        if let Some(doc) = cache::read(&dir, &key) {
            let middle = doc.middle.map(|m| m.catalog);
            if middle.is_some() == (ambient == Ambient::MorphismCategory) {
                return Ok((doc.base.catalog, middle, CacheStatus::Hit));
            }
        }
    }
    let (base, middle) = compute_catalogs(scenario, alg)?;
    if mode == CacheMode::Off {
        return Ok((base, middle, CacheStatus::Disabled));
    }
    let caps = &scenario.caps;
    let base_cat = ModCat::new(alg.clone(), base.clone(), caps.clone());
    let middle_doc = match &middle {
        Some(m) => Some(cached(&ModCat::new(triangular_matrix_algebra(alg)?, m.clone(), caps.clone()))),
        None => None,
    };
    let doc = CacheDoc {
        format: "extricat-catalog".into(),
        version: cache::FORMAT_VERSION,
        key,
        algebra: scenario.algebra.clone(),
        bounds: bounds_for(caps, alg),
        multiplicity: caps.multiplicity,
        base: cached(&base_cat),
        middle: middle_doc,
    };
    cache::write(&dir, &doc)?;
    Ok((base, middle, CacheStatus::Written))
}

fn map_names(scenario: &Scenario) -> Vec<BTreeMap<(String, String), String>> {
    let mut rounds: Vec<BTreeMap<(String, String), String>> = Vec::new();
    let mut count: BTreeMap<(String, String), usize> = BTreeMap::new();
    for (name, target) in &scenario.aliases {
        if let AliasTarget::Map(s, t) = target {
            let key = (s.clone(), t.clone());
            let k = count.entry(key.clone()).or_default();
            if rounds.len() <= *k {
                rounds.push(BTreeMap::new());
            }
            rounds[*k].insert(key, name.clone());
            *k += 1;
        }
    }
    rounds
}

fn apply_object_aliases(scenario: &Scenario, base: &mut Catalog, middle: Option<&mut Catalog>) -> Result<(), CliError> {
    let n = scenario.algebra.vertices.len();
    let mut middle = middle;
    for (name, target) in &scenario.aliases {
        match target {
            AliasTarget::Map(..) => {}
            AliasTarget::Name(canon) => {
                let i = base.resolve(canon)?;
                base.add_alias(i, name.clone());
            }
            AliasTarget::Dims(d) => {
                let cat: &mut Catalog = if d.len() == n {
                    base
                } else if d.len() == 2 * n && middle.is_some() {
                    middle.as_deref_mut().unwrap()
                } else {
                    return Err(CliError::Usage(format!("alias {name}: dimension vector {d:?} has the wrong length")));
                };
                let hits: Vec<usize> = (0..cat.len()).filter(|&i| &cat.objects[i].dims == d).collect();
                match hits.as_slice() {
                    [i] => cat.add_alias(*i, name.clone()),
                    [] => return Err(CliError::Core(extricat_core::Error::UnknownName(format!("{name} = {d:?}")))),
                    _ => return Err(CliError::Usage(format!("alias {name}: dimension vector {d:?} is not unique"))),
                }
            }
        }
    }
    Ok(())
}

pub fn resolve_names(cat: &ModCat, names: &[String]) -> Result<Subcat, CliError> {
    let mut out = Vec::new();
    for n in names {
        out.push(cat.catalog.resolve(n)?);
    }
    Ok(Subcat::of(out))
}

impl World {
    pub fn load(scenario: Scenario, mode: CacheMode) -> Result<World, CliError> {
        let alg = build_algebra(&scenario)?;
        let (mut base_cat, mut middle_cat, cache) = catalogs(&scenario, &alg, mode)?;
        apply_object_aliases(&scenario, &mut base_cat, middle_cat.as_mut())?;
        let caps = scenario.caps.clone();
        let base = Arc::new(ModCat::new(alg.clone(), base_cat, caps.clone()));
        let mc = match middle_cat {
            None => None,
            Some(mut m) => {
                let shell = MorphismCategory::from_parts(base.clone(), Arc::new(ModCat::new(triangular_matrix_algebra(&alg)?, m.clone(), caps.clone())));
                let rounds = map_names(&scenario);
                if rounds.is_empty() {
                    MorphismCategory::alias_middle(&mut m, &shell, &|_, _| None);
                }
                for round in &rounds {
                    let lookup = |s: &str, t: &str| round.get(&(s.to_string(), t.to_string())).cloned();
                    MorphismCategory::alias_middle(&mut m, &shell, &lookup);
                }
                let middle = Arc::new(ModCat::new(triangular_matrix_algebra(&alg)?, m, caps.clone()));
                Some(Arc::new(MorphismCategory::from_parts(base.clone(), middle)))
            }
        };
        let ambient_cat = match &mc {
            Some(m) => m.middle.clone(),
            None => base.clone(),
        };
        let carrier = match &scenario.construction {
            Construction::Subcategory { objects, .. } => resolve_names(&ambient_cat, objects)?,
            _ => Subcat::full(ambient_cat.len()),
        };
        let main = ExCat::new(ambient_cat, carrier.clone());
        let rec = match (&scenario.recollement, &mc) {
            (Some(spec), Some(mc)) => {
                let side = |l: &Option<Vec<String>>| match l {
                    Some(names) => resolve_names(&mc.base, names),
                    None => Ok(Subcat::full(mc.base.len())),
                };
                let mut r = RecollementScenario::new(mc.clone(), side(&spec.a)?, carrier, side(&spec.c)?);
                for (role, imp) in &spec.wiring {
                    r = r.rewire(FunctorTag::parse(role)?, FunctorTag::parse(imp)?);
                }
                Some(r)
            }
            _ => None,
        };
        let hash = scenario.hash();
        Ok(World {
            scenario,
            hash,
            base,
            mc,
            rec,
            main,
            cache,
        })
    }

    pub fn recollement(&self) -> Result<&RecollementScenario, CliError> {
        self.rec
            .as_ref()
            .ok_or_else(|| CliError::Usage(format!("scenario {} has no recollement", self.scenario.name)))
    }

    /// The category named by `--side`; defaults to the scenario's own category.
    pub fn side(&self, side: Option<Side>) -> Result<ExCat, CliError> {
        match side {
            None | Some(Side::B) => Ok(self.main.clone()),
            Some(s) => match &self.rec {
                Some(r) => Ok(r.side(s).clone()),
                None if self.mc.is_some() => Ok(ExCat::full(self.base.clone())),
                None => Err(CliError::Usage("this scenario has a single category".into())),
            },
        }
    }
}

/// A subcategory literal: a comma-separated list of names, or one of
/// `all`, `none`, `proj`, `inj`.
pub fn parse_subcat(x: &ExCat, text: &str) -> Result<Subcat, CliError> {
    let t = text.trim();
    let sub = match t {
        "all" => x.carrier.clone(),
        "none" | "0" | "" => Subcat::empty(),
        "proj" => Subcat::of(x.projectives()),
        "inj" => Subcat::of(x.injectives()),
        _ => resolve_names(&x.cat, &split_list(t))?,
    };
    for i in sub.iter() {
        if !x.carrier.contains(i) {
            return Err(CliError::Usage(format!("{} is not in the category", x.label(i))));
        }
    }
    Ok(sub)
}
