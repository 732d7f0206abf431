//! Bound quiver algebras over a prime field.
//!
//! Representations are covariant: an arrow `x -> y` acts as a linear map
//! `V_x -> V_y`. Paths are stored in traversal order (first arrow first);
//! relations written in composition notation such as `beta*alpha` are
//! converted on parse.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactlin::{Field, Mat};
use crate::repcat::Rep;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Arrow {
    pub label: String,
    pub source: usize,
    pub target: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Quiver {
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
}

impl Quiver {
    /// Arrows are given as `(label, source label, target label)`.
    pub fn new(vertices: Vec<String>, arrows: Vec<(String, String, String)>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for v in &vertices {
            if !seen.insert(v.clone()) {
                return Err(Error::DuplicateLabel(v.clone()));
            }
        }
        let index: HashMap<&str, usize> = vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.as_str(), i))
            .collect();
        let mut out = Vec::with_capacity(arrows.len());
        for (label, s, t) in arrows {
            if !seen.insert(label.clone()) {
                return Err(Error::DuplicateLabel(label));
            }
            let source = *index
                .get(s.as_str())
                .ok_or_else(|| Error::UnknownVertex(s.clone()))?;
            let target = *index
                .get(t.as_str())
                .ok_or_else(|| Error::UnknownVertex(t.clone()))?;
            out.push(Arrow {
                label,
                source,
                target,
            });
        }
        let q = Quiver {
            vertices,
            arrows: out,
        };
        q.check_acyclic()?;
        Ok(q)
    }

    fn check_acyclic(&self) -> Result<()> {
        // Kahn's algorithm; any vertex left over lies on a cycle.
        let n = self.vertices.len();
        let mut indeg = vec![0usize; n];
        for a in &self.arrows {
            indeg[a.target] += 1;
        }
        let mut stack: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut removed = 0;
        while let Some(v) = stack.pop() {
            removed += 1;
            for a in self.arrows.iter().filter(|a| a.source == v) {
                indeg[a.target] -= 1;
                if indeg[a.target] == 0 {
                    stack.push(a.target);
                }
            }
        }
        if removed < n {
            let v = (0..n).find(|&v| indeg[v] > 0).unwrap_or(0);
            return Err(Error::CyclicQuiver(self.vertices[v].clone()));
        }
        Ok(())
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex(&self, label: &str) -> Result<usize> {
        self.vertices
            .iter()
            .position(|v| v == label)
            .ok_or_else(|| Error::UnknownVertex(label.to_string()))
    }

    pub fn arrow(&self, label: &str) -> Result<usize> {
        self.arrows
            .iter()
            .position(|a| a.label == label)
            .ok_or_else(|| Error::UnknownArrow(label.to_string()))
    }

    /// All paths from `s` to `t`, shortest first, ties broken by arrow indices.
    fn paths_between(&self, s: usize, t: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut stack: Vec<(usize, Vec<usize>)> = vec![(s, Vec::new())];
        while let Some((v, path)) = stack.pop() {
            if v == t {
                out.push(path.clone());
            }
            for (i, a) in self.arrows.iter().enumerate() {
                if a.source == v {
                    let mut next = path.clone();
                    next.push(i);
                    stack.push((a.target, next));
                }
            }
        }
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        out
    }
}

/// A linear combination of parallel paths, each of length at least two.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Relation {
    /// `(coefficient, arrows in traversal order)`
    pub terms: Vec<(u32, Vec<usize>)>,
}

impl Relation {
    pub fn new(terms: Vec<(u32, Vec<usize>)>) -> Self {
        Relation { terms }
    }

    fn endpoints(&self, q: &Quiver) -> Result<(usize, usize)> {
        let mut ends = None;
        if self.terms.is_empty() {
            return Err(Error::BadRelation("empty relation".into()));
        }
        for (_, path) in &self.terms {
            if path.len() < 2 {
                return Err(Error::BadRelation(format!(
                    "path of length {} (need at least 2)",
                    path.len()
                )));
            }
            for &a in path {
                if a >= q.arrows.len() {
                    return Err(Error::BadRelation(format!("arrow index {a} out of range")));
                }
            }
            for w in path.windows(2) {
                if q.arrows[w[0]].target != q.arrows[w[1]].source {
                    return Err(Error::BadRelation(format!(
                        "{} and {} are not composable",
                        q.arrows[w[0]].label, q.arrows[w[1]].label
                    )));
                }
            }
            let e = (
                q.arrows[path[0]].source,
                q.arrows[*path.last().unwrap()].target,
            );
            match ends {
                None => ends = Some(e),
                Some(prev) if prev != e => {
                    return Err(Error::BadRelation("paths are not parallel".into()))
                }
                _ => {}
            }
        }
        Ok(ends.unwrap())
    }
}

#[derive(Clone, Debug)]
struct Component {
    paths: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
    /// Echelonized spanning set of the relation ideal inside this component.
    reducer: Mat,
    pivots: Vec<usize>,
    /// Indices into `paths` of the paths kept as basis elements.
    basis: Vec<usize>,
}

/// A bound quiver algebra `kQ/I` with its path basis.
#[derive(Clone, Debug)]
pub struct Algebra {
    quiver: Quiver,
    relations: Vec<Relation>,
    field: Field,
    components: Vec<Vec<Component>>,
}

impl PartialEq for Algebra {
    fn eq(&self, other: &Self) -> bool {
        self.quiver == other.quiver
            && self.relations == other.relations
            && self.field == other.field
    }
}

impl Eq for Algebra {}

impl Algebra {
    pub fn new(quiver: Quiver, relations: Vec<Relation>, field: Field) -> Result<Self> {
        let p = field.p();
        let n = quiver.vertex_count();
        let rel_ends = relations
            .iter()
            .map(|r| r.endpoints(&quiver))
            .collect::<Result<Vec<_>>>()?;
        let mut components = Vec::with_capacity(n);
        for s in 0..n {
            let mut row = Vec::with_capacity(n);
            for t in 0..n {
                let paths = quiver.paths_between(s, t);
                let index: HashMap<Vec<usize>, usize> = paths
                    .iter()
                    .enumerate()
                    .map(|(i, path)| (path.clone(), i))
                    .collect();
                // u * r * w for every relation r and paths w: s -> src(r), u: tgt(r) -> t
                let mut gens: Vec<Vec<u32>> = Vec::new();
                for (rel, &(rs, rt)) in relations.iter().zip(&rel_ends) {
                    for w in quiver.paths_between(s, rs) {
                        for u in quiver.paths_between(rt, t) {
                            let mut v = vec![0u32; paths.len()];
                            for (c, mid) in &rel.terms {
                                let mut full = w.clone();
                                full.extend_from_slice(mid);
                                full.extend_from_slice(&u);
                                let i = index[&full];
                                v[i] = field.add(v[i], c % p);
                            }
                            gens.push(v);
                        }
                    }
                }
                let (reducer, pivots) = if gens.is_empty() {
                    (Mat::zeros(p, 0, paths.len()), Vec::new())
                } else {
                    let (r, piv) = Mat::from_rows(p, &gens).rref();
                    (r.submatrix(0, piv.len(), 0, paths.len()), piv)
                };
                let basis = (0..paths.len()).filter(|i| !pivots.contains(i)).collect();
                row.push(Component {
                    paths,
                    index,
                    reducer,
                    pivots,
                    basis,
                });
            }
            components.push(row);
        }
        Ok(Algebra {
            quiver,
            relations,
            field,
            components,
        })
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn p(&self) -> u32 {
        self.field.p()
    }

    pub fn vertex_count(&self) -> usize {
        self.quiver.vertex_count()
    }

    pub fn arrow_count(&self) -> usize {
        self.quiver.arrows.len()
    }

    /// Basis paths from `s` to `t` (traversal order).
    pub fn path_basis(&self, s: usize, t: usize) -> Vec<&[usize]> {
        let c = &self.components[s][t];
        c.basis.iter().map(|&i| c.paths[i].as_slice()).collect()
    }

    pub fn dim(&self) -> usize {
        self.components
            .iter()
            .flat_map(|row| row.iter())
            .map(|c| c.basis.len())
            .sum()
    }

    /// Coordinates of the residue class of `path` (from `s` to `t`) in the
    /// path basis of that component.
    pub fn normal_form(&self, s: usize, t: usize, path: &[usize]) -> Vec<u32> {
        let c = &self.components[s][t];
        let mut x = vec![0u32; c.paths.len()];
        x[c.index[path]] = 1;
        for (i, &pc) in c.pivots.iter().enumerate() {
            let factor = x[pc];
            if factor == 0 {
                continue;
            }
            for (j, xj) in x.iter_mut().enumerate() {
                let r = c.reducer.get(i, j);
                if r != 0 {
                    *xj = self.field.sub(*xj, self.field.mul(factor, r));
                }
            }
        }
        c.basis.iter().map(|&i| x[i]).collect()
    }

    /// Matrix of the path (in traversal order) acting on a representation.
    pub fn path_action(&self, rep: &Rep, source: usize, path: &[usize]) -> Mat {
        let mut m = Mat::identity(self.p(), rep.dims[source]);
        for &a in path {
            m = rep.mats[a].mul(&m);
        }
        m
    }

    /// Projective `P_v`: basis at `w` is the set of basis paths `v -> w`.
    pub fn projective(&self, v: usize) -> Rep {
        let p = self.p();
        let n = self.vertex_count();
        let dims: Vec<usize> = (0..n).map(|w| self.components[v][w].basis.len()).collect();
        let mats = self
            .quiver
            .arrows
            .iter()
            .map(|a| {
                let cols: Vec<Vec<u32>> = self
                    .path_basis(v, a.source)
                    .into_iter()
                    .map(|path| {
                        let mut ext = path.to_vec();
                        ext.push(self.quiver.arrow(&a.label).unwrap());
                        self.normal_form(v, a.target, &ext)
                    })
                    .collect();
                Mat::from_columns(p, dims[a.target], &cols)
            })
            .collect();
        Rep { dims, mats }
    }

    /// Injective `I_v`: dual of the paths into `v`.
    pub fn injective(&self, v: usize) -> Rep {
        let p = self.p();
        let n = self.vertex_count();
        let dims: Vec<usize> = (0..n).map(|w| self.components[w][v].basis.len()).collect();
        let mats = self
            .quiver
            .arrows
            .iter()
            .enumerate()
            .map(|(ai, a)| {
                let mut m = Mat::zeros(p, dims[a.target], dims[a.source]);
                for (row, q) in self.path_basis(a.target, v).into_iter().enumerate() {
                    let mut ext = vec![ai];
                    ext.extend_from_slice(q);
                    let nf = self.normal_form(a.source, v, &ext);
                    for (col, &c) in nf.iter().enumerate() {
                        m.set(row, col, c);
                    }
                }
                m
            })
            .collect();
        Rep { dims, mats }
    }

    pub fn simple(&self, v: usize) -> Rep {
        let n = self.vertex_count();
        let dims: Vec<usize> = (0..n).map(|w| usize::from(w == v)).collect();
        let mats = self
            .quiver
            .arrows
            .iter()
            .map(|a| Mat::zeros(self.p(), dims[a.target], dims[a.source]))
            .collect();
        Rep { dims, mats }
    }

    /// Checks matrix shapes and that every relation acts as zero.
    pub fn validate_rep(&self, rep: &Rep) -> Result<()> {
        if rep.dims.len() != self.vertex_count() || rep.mats.len() != self.arrow_count() {
            return Err(Error::BadRep("wrong number of vertices or arrows".into()));
        }
        for (a, m) in self.quiver.arrows.iter().zip(&rep.mats) {
            if m.shape() != (rep.dims[a.target], rep.dims[a.source]) || m.p() != self.p() {
                return Err(Error::BadRep(format!("matrix of arrow {} has wrong shape", a.label)));
            }
        }
        for (k, rel) in self.relations.iter().enumerate() {
            let (s, t) = rel.endpoints(&self.quiver)?;
            let mut acc = Mat::zeros(self.p(), rep.dims[t], rep.dims[s]);
            for (c, path) in &rel.terms {
                acc = acc.add(&self.path_action(rep, s, path).scale(*c));
            }
            if !acc.is_zero() {
                return Err(Error::BadRep(format!("relation {k} does not vanish")));
            }
        }
        Ok(())
    }

    /// Regular representation dimension vector: number of basis paths ending at each vertex.
    pub fn regular_dims(&self) -> Vec<usize> {
        let n = self.vertex_count();
        (0..n)
            .map(|w| (0..n).map(|v| self.components[v][w].basis.len()).sum())
            .collect()
    }

    /// Relation in composition notation (`beta*alpha - gamma*delta`).
    pub fn describe_relation(&self, rel: &Relation) -> String {
        let mut out = String::new();
        for (i, (c, path)) in rel.terms.iter().enumerate() {
            let word: Vec<&str> = path
                .iter()
                .rev()
                .map(|&a| self.quiver.arrows[a].label.as_str())
                .collect();
            let neg = self.field.neg(*c);
            if i > 0 {
                if neg < *c {
                    out.push_str(" - ");
                } else {
                    out.push_str(" + ");
                }
            } else if neg < *c {
                out.push('-');
            }
            let mag = if i > 0 || neg < *c { (*c).min(neg) } else { *c };
            if mag != 1 {
                out.push_str(&format!("{mag} "));
            }
            out.push_str(&word.join("*"));
        }
        out
    }
}

impl fmt::Display for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{} Q with vertices {:?}", self.p(), self.quiver.vertices)
    }
}

/// The path algebra of `1 -> 2` with arrow `alpha`.
pub fn a2(p: u32) -> Result<Algebra> {
    let q = Quiver::new(
        vec!["1".into(), "2".into()],
        vec![("alpha".into(), "1".into(), "2".into())],
    )?;
    Algebra::new(q, Vec::new(), Field::new(p)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single_vertex() -> Algebra {
        let q = Quiver::new(vec!["1".into()], vec![]).unwrap();
        Algebra::new(q, vec![], Field::new(2).unwrap()).unwrap()
    }

    fn diamond() -> Algebra {
        // 1 -alpha-> 2 -beta-> 4, 1 -delta-> 3 -gamma-> 4, beta*alpha = gamma*delta
        let q = Quiver::new(
            vec!["1".into(), "2".into(), "3".into(), "4".into()],
            vec![
                ("alpha".into(), "1".into(), "2".into()),
                ("beta".into(), "2".into(), "4".into()),
                ("delta".into(), "1".into(), "3".into()),
                ("gamma".into(), "3".into(), "4".into()),
            ],
        )
        .unwrap();
        let rel = Relation::new(vec![(1, vec![0, 1]), (1, vec![2, 3])]);
        Algebra::new(q, vec![rel], Field::new(2).unwrap()).unwrap()
    }

    #[test]
    fn a2_basis() {
        let a = a2(2).unwrap();
        assert_eq!(a.dim(), 3);
        assert_eq!(a.path_basis(0, 1), vec![&[0usize][..]]);
    }

    #[test]
    fn single_vertex_basis() {
        let a = single_vertex();
        assert_eq!(a.dim(), 1);
        assert_eq!(a.projective(0).dims, vec![1]);
        assert_eq!(a.injective(0).dims, vec![1]);
    }

    #[test]
    fn diamond_dimension() {
        let a = diamond();
        assert_eq!(a.dim(), 9);
        assert_eq!(a.path_basis(0, 3).len(), 1);
    }

    #[test]
    fn a2_projectives_and_injectives() {
        let a = a2(2).unwrap();
        assert_eq!(a.projective(0).dims, vec![1, 1]);
        assert_eq!(a.projective(1).dims, vec![0, 1]);
        assert_eq!(a.injective(0).dims, vec![1, 0]);
        assert_eq!(a.injective(1).dims, vec![1, 1]);
        assert_eq!(a.projective(0), a.injective(1));
        assert_eq!(a.projective(1), a.simple(1));
        assert_eq!(a.injective(0), a.simple(0));
    }

    #[test]
    fn projectives_sum_to_regular() {
        for alg in [a2(3).unwrap(), diamond(), single_vertex()] {
            let n = alg.vertex_count();
            let mut total = vec![0; n];
            for v in 0..n {
                for (t, d) in total.iter_mut().zip(alg.projective(v).dims) {
                    *t += d;
                }
            }
            assert_eq!(total, alg.regular_dims());
            for v in 0..n {
                alg.validate_rep(&alg.projective(v)).unwrap();
                alg.validate_rep(&alg.injective(v)).unwrap();
            }
        }
    }

    #[test]
    fn rejects_cycles_and_bad_relations() {
        let err = Quiver::new(
            vec!["1".into(), "2".into()],
            vec![
                ("a".into(), "1".into(), "2".into()),
                ("b".into(), "2".into(), "1".into()),
            ],
        );
        assert!(matches!(err, Err(Error::CyclicQuiver(_))));

        let q = Quiver::new(
            vec!["1".into(), "2".into(), "3".into()],
            vec![
                ("a".into(), "1".into(), "2".into()),
                ("b".into(), "2".into(), "3".into()),
                ("c".into(), "1".into(), "3".into()),
            ],
        )
        .unwrap();
        let short = Relation::new(vec![(1, vec![0, 1]), (1, vec![2])]);
        assert!(matches!(
            Algebra::new(q.clone(), vec![short], Field::new(2).unwrap()),
            Err(Error::BadRelation(_))
        ));
        let gapped = Relation::new(vec![(1, vec![1, 0])]);
        assert!(matches!(
            Algebra::new(q, vec![gapped], Field::new(2).unwrap()),
            Err(Error::BadRelation(_))
        ));
    }

    #[test]
    fn relation_rendering() {
        let a = diamond();
        assert_eq!(a.describe_relation(&a.relations()[0]), "beta*alpha + gamma*delta");
    }
}
