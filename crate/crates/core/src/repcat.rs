//! Representations, morphisms, (co)kernels, Ext¹ and indecomposable catalogs.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use crate::algebra::Algebra;
use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::exactlin::{space_size, Cokernel, Mat, VectorIter};

/// A representation: a vector space per vertex and a matrix per arrow.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Rep {
    pub dims: Vec<usize>,
    pub mats: Vec<Mat>,
}

impl fmt::Debug for Rep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Rep{:?}{:?}", self.dims, self.mats)
    }
}

impl Rep {
    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.total_dim() == 0
    }

    pub fn direct_sum(&self, other: &Rep) -> Rep {
        Rep {
            dims: self.dims.iter().zip(&other.dims).map(|(a, b)| a + b).collect(),
            mats: self
                .mats
                .iter()
                .zip(&other.mats)
                .map(|(a, b)| a.block_diag(b))
                .collect(),
        }
    }
}

/// A morphism of representations, one matrix per vertex.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RepMap {
    pub source: Rep,
    pub target: Rep,
    pub comps: Vec<Mat>,
}

impl fmt::Debug for RepMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RepMap{:?}", self.comps)
    }
}

impl RepMap {
    pub fn identity(p: u32, rep: &Rep) -> RepMap {
        RepMap {
            source: rep.clone(),
            target: rep.clone(),
            comps: rep.dims.iter().map(|&d| Mat::identity(p, d)).collect(),
        }
    }

    pub fn zero(p: u32, source: &Rep, target: &Rep) -> RepMap {
        RepMap {
            source: source.clone(),
            target: target.clone(),
            comps: source
                .dims
                .iter()
                .zip(&target.dims)
                .map(|(&s, &t)| Mat::zeros(p, t, s))
                .collect(),
        }
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &RepMap) -> RepMap {
        assert_eq!(first.target, self.source, "composition endpoint mismatch");
        RepMap {
            source: first.source.clone(),
            target: self.target.clone(),
            comps: self
                .comps
                .iter()
                .zip(&first.comps)
                .map(|(g, f)| g.mul(f))
                .collect(),
        }
    }

    pub fn add(&self, other: &RepMap) -> RepMap {
        RepMap {
            source: self.source.clone(),
            target: self.target.clone(),
            comps: self.comps.iter().zip(&other.comps).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn sub(&self, other: &RepMap) -> RepMap {
        RepMap {
            source: self.source.clone(),
            target: self.target.clone(),
            comps: self.comps.iter().zip(&other.comps).map(|(a, b)| a.sub(b)).collect(),
        }
    }

    pub fn scale(&self, c: u32) -> RepMap {
        RepMap {
            source: self.source.clone(),
            target: self.target.clone(),
            comps: self.comps.iter().map(|m| m.scale(c)).collect(),
        }
    }

    pub fn neg(&self) -> RepMap {
        RepMap {
            source: self.source.clone(),
            target: self.target.clone(),
            comps: self.comps.iter().map(|m| m.neg()).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|m| m.is_zero())
    }

    pub fn is_injective(&self) -> bool {
        self.comps.iter().all(|m| m.rank() == m.cols())
    }

    pub fn is_surjective(&self) -> bool {
        self.comps.iter().all(|m| m.rank() == m.rows())
    }

    pub fn is_iso(&self) -> bool {
        self.comps.iter().all(|m| m.is_invertible())
    }

    pub fn inverse(&self) -> Option<RepMap> {
        let comps = self.comps.iter().map(|m| m.inverse()).collect::<Option<Vec<_>>>()?;
        Some(RepMap {
            source: self.target.clone(),
            target: self.source.clone(),
            comps,
        })
    }

    pub fn pow(&self, e: usize) -> RepMap {
        RepMap {
            source: self.source.clone(),
            target: self.target.clone(),
            comps: self.comps.iter().map(|m| m.pow(e)).collect(),
        }
    }

    /// Concatenated row-major entries of the components.
    pub fn flatten(&self) -> Vec<u32> {
        self.comps.iter().flat_map(|m| m.entries().iter().copied()).collect()
    }
}

/// A short exact sequence `A -incl-> B -proj-> C`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Conflation {
    pub incl: RepMap,
    pub proj: RepMap,
}

impl Conflation {
    pub fn left(&self) -> &Rep {
        &self.incl.source
    }

    pub fn middle(&self) -> &Rep {
        &self.incl.target
    }

    pub fn right(&self) -> &Rep {
        &self.proj.target
    }

    /// Vertexwise exactness: `incl` injective, `proj` surjective, `im incl = ker proj`.
    pub fn is_exact(&self) -> bool {
        self.incl.target == self.proj.source
            && self.incl.is_injective()
            && self.proj.is_surjective()
            && self.proj.after(&self.incl).is_zero()
            && self
                .incl
                .source
                .dims
                .iter()
                .zip(&self.proj.target.dims)
                .zip(&self.incl.target.dims)
                .all(|((a, c), b)| a + c == *b)
    }
}

/// A space of morphisms with a fixed basis.
#[derive(Clone, Debug)]
pub struct HomSpace {
    pub source: Rep,
    pub target: Rep,
    pub basis: Vec<RepMap>,
    /// Columns are the flattened basis maps.
    matrix: Mat,
}

impl HomSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn element(&self, coeffs: &[u32]) -> RepMap {
        let p = self.matrix.p();
        let mut out = RepMap::zero(p, &self.source, &self.target);
        for (b, &c) in self.basis.iter().zip(coeffs) {
            if c != 0 {
                out = out.add(&b.scale(c));
            }
        }
        out
    }

    /// Coordinates of `f` in the basis, `None` if `f` is not a morphism.
    pub fn coords(&self, f: &RepMap) -> Option<Vec<u32>> {
        self.matrix.solve(&f.flatten())
    }

    pub fn elements(&self) -> impl Iterator<Item = RepMap> + '_ {
        VectorIter::new(self.matrix.p(), self.basis.len()).map(move |c| self.element(&c))
    }
}

/// A subrepresentation given by per-vertex column bases.
#[derive(Clone, Debug)]
pub struct Sub {
    pub rep: Rep,
    pub incl: RepMap,
}

impl Sub {
    /// Factors `h` through the inclusion, if its image lies inside.
    pub fn factor(&self, h: &RepMap) -> Option<RepMap> {
        let comps = self
            .incl
            .comps
            .iter()
            .zip(&h.comps)
            .map(|(b, m)| b.solve_matrix(m))
            .collect::<Option<Vec<_>>>()?;
        Some(RepMap {
            source: h.source.clone(),
            target: self.rep.clone(),
            comps,
        })
    }
}

/// A quotient representation with chosen sections.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub rep: Rep,
    pub proj: RepMap,
    pub sections: Vec<Mat>,
}

impl Quotient {
    /// The map out of the quotient induced by `h`, which must vanish on the kernel.
    pub fn induce(&self, h: &RepMap) -> RepMap {
        RepMap {
            source: self.rep.clone(),
            target: h.target.clone(),
            comps: h.comps.iter().zip(&self.sections).map(|(m, s)| m.mul(s)).collect(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct DirectSum {
    pub rep: Rep,
    pub inj: Vec<RepMap>,
    pub proj: Vec<RepMap>,
}

/// Projective cover `0 -> Ω -> P -> M -> 0` with `P = ⊕ P_v`.
#[derive(Clone, Debug)]
pub struct ProjectiveCover {
    /// Vertex of each indecomposable projective summand, in order.
    pub summands: Vec<usize>,
    pub p: Rep,
    pub epi: RepMap,
    pub syzygy: Rep,
    pub incl: RepMap,
}

/// `Ext¹(C, A)` computed from the projective presentation of `C`.
#[derive(Clone, Debug)]
pub struct ExtSpace {
    pub c: Rep,
    pub a: Rep,
    pub cover: ProjectiveCover,
    /// `Hom(Ω, A)`.
    pub hom: HomSpace,
    coker: Cokernel,
}

impl ExtSpace {
    pub fn dim(&self) -> usize {
        self.coker.dim
    }

    /// Cocycle `Ω -> A` representing the class with the given coordinates.
    pub fn representative(&self, x: &[u32]) -> RepMap {
        let coeffs = self.coker.section.mul_vec(x);
        self.hom.element(&coeffs)
    }

    /// Class of a cocycle `Ω -> A`.
    pub fn class_of(&self, rho: &RepMap) -> Vec<u32> {
        let c = self.hom.coords(rho).expect("cocycle is not a morphism");
        self.coker.proj.mul_vec(&c)
    }

    pub fn elements(&self) -> VectorIter {
        VectorIter::new(self.p(), self.dim())
    }

    pub fn p(&self) -> u32 {
        self.coker.proj.p()
    }
}

impl Algebra {
    pub fn zero_rep(&self) -> Rep {
        Rep {
            dims: vec![0; self.vertex_count()],
            mats: vec![Mat::zeros(self.p(), 0, 0); self.arrow_count()],
        }
    }

    pub fn validate_map(&self, f: &RepMap) -> Result<()> {
        let n = self.vertex_count();
        if f.comps.len() != n {
            return Err(Error::BadRep("wrong number of components".into()));
        }
        for v in 0..n {
            if f.comps[v].shape() != (f.target.dims[v], f.source.dims[v]) {
                return Err(Error::EndpointMismatch(format!(
                    "component at vertex {} has the wrong shape",
                    self.quiver().vertices()[v]
                )));
            }
        }
        for (i, a) in self.quiver().arrows().iter().enumerate() {
            let lhs = f.comps[a.target].mul(&f.source.mats[i]);
            let rhs = f.target.mats[i].mul(&f.comps[a.source]);
            if lhs != rhs {
                return Err(Error::NonCommuting(a.label.clone()));
            }
        }
        Ok(())
    }

    pub fn hom_space(&self, m: &Rep, n: &Rep) -> HomSpace {
        let p = self.p();
        let f = self.field();
        let nv = self.vertex_count();
        let mut offsets = Vec::with_capacity(nv);
        let mut total = 0;
        for v in 0..nv {
            offsets.push(total);
            total += n.dims[v] * m.dims[v];
        }
        let mut rows: Vec<Vec<u32>> = Vec::new();
        for (ai, a) in self.quiver().arrows().iter().enumerate() {
            let (x, y) = (a.source, a.target);
            let ma = &m.mats[ai];
            let na = &n.mats[ai];
            for i in 0..n.dims[y] {
                for j in 0..m.dims[x] {
                    let mut row = vec![0u32; total];
                    // (phi_y M_a)[i,j] - (N_a phi_x)[i,j]
                    for k in 0..m.dims[y] {
                        let c = ma.get(k, j);
                        if c != 0 {
                            let idx = offsets[y] + i * m.dims[y] + k;
                            row[idx] = f.add(row[idx], c);
                        }
                    }
                    for k in 0..n.dims[x] {
                        let c = na.get(i, k);
                        if c != 0 {
                            let idx = offsets[x] + k * m.dims[x] + j;
                            row[idx] = f.sub(row[idx], c);
                        }
                    }
                    rows.push(row);
                }
            }
        }
        let constraints = if rows.is_empty() {
            Mat::zeros(p, 0, total)
        } else {
            Mat::from_rows(p, &rows)
        };
        let kernel = constraints.kernel_basis();
        let basis = kernel
            .iter()
            .map(|v| {
                let comps = (0..nv)
                    .map(|w| {
                        let len = n.dims[w] * m.dims[w];
                        Mat::new(p, n.dims[w], m.dims[w], v[offsets[w]..offsets[w] + len].to_vec())
                    })
                    .collect();
                RepMap {
                    source: m.clone(),
                    target: n.clone(),
                    comps,
                }
            })
            .collect();
        HomSpace {
            source: m.clone(),
            target: n.clone(),
            basis,
            matrix: Mat::from_columns(p, total, &kernel),
        }
    }

    pub fn hom_basis(&self, m: &Rep, n: &Rep) -> Vec<RepMap> {
        self.hom_space(m, n).basis
    }

    pub fn hom_dim(&self, m: &Rep, n: &Rep) -> usize {
        self.hom_space(m, n).dim()
    }

    /// Subrepresentation spanned by the columns of `bases[v]` (must be invariant).
    pub fn subrep(&self, m: &Rep, bases: Vec<Mat>) -> Sub {
        let dims: Vec<usize> = bases.iter().map(|b| b.cols()).collect();
        let mats = self
            .quiver()
            .arrows()
            .iter()
            .enumerate()
            .map(|(i, a)| {
                let image = m.mats[i].mul(&bases[a.source]);
                bases[a.target]
                    .solve_matrix(&image)
                    .expect("subspace is not invariant under an arrow")
            })
            .collect();
        let rep = Rep { dims, mats };
        Sub {
            incl: RepMap {
                source: rep.clone(),
                target: m.clone(),
                comps: bases,
            },
            rep,
        }
    }

    /// Quotient of `m` by the invariant subspace spanned by the columns of `bases[v]`.
    pub fn quotient(&self, m: &Rep, bases: &[Mat]) -> Quotient {
        let cok: Vec<Cokernel> = bases.iter().map(|b| b.cokernel_data()).collect();
        let dims: Vec<usize> = cok.iter().map(|c| c.dim).collect();
        let mats = self
            .quiver()
            .arrows()
            .iter()
            .enumerate()
            .map(|(i, a)| cok[a.target].proj.mul(&m.mats[i]).mul(&cok[a.source].section))
            .collect();
        let rep = Rep { dims, mats };
        Quotient {
            proj: RepMap {
                source: m.clone(),
                target: rep.clone(),
                comps: cok.iter().map(|c| c.proj.clone()).collect(),
            },
            sections: cok.into_iter().map(|c| c.section).collect(),
            rep,
        }
    }

    pub fn kernel(&self, f: &RepMap) -> Sub {
        let bases = f.comps.iter().map(|c| c.kernel_matrix()).collect();
        self.subrep(&f.source, bases)
    }

    pub fn cokernel(&self, f: &RepMap) -> Quotient {
        self.quotient(&f.target, &f.comps)
    }

    /// Image of `f` as a subrepresentation of the target, with the corestriction.
    pub fn image(&self, f: &RepMap) -> (Sub, RepMap) {
        let bases = f.comps.iter().map(|c| c.column_space()).collect();
        let sub = self.subrep(&f.target, bases);
        let onto = sub.factor(f).expect("image factorization");
        (sub, onto)
    }

    pub fn direct_sum(&self, parts: &[Rep]) -> DirectSum {
        let p = self.p();
        let mut rep = self.zero_rep();
        for part in parts {
            rep = rep.direct_sum(part);
        }
        let nv = self.vertex_count();
        let mut offsets = vec![0usize; nv];
        let mut inj = Vec::new();
        let mut proj = Vec::new();
        for part in parts {
            let mut icomps = Vec::with_capacity(nv);
            let mut pcomps = Vec::with_capacity(nv);
            for v in 0..nv {
                let mut i = Mat::zeros(p, rep.dims[v], part.dims[v]);
                i.paste(offsets[v], 0, &Mat::identity(p, part.dims[v]));
                pcomps.push(i.transpose());
                icomps.push(i);
                offsets[v] += part.dims[v];
            }
            inj.push(RepMap {
                source: part.clone(),
                target: rep.clone(),
                comps: icomps,
            });
            proj.push(RepMap {
                source: rep.clone(),
                target: part.clone(),
                comps: pcomps,
            });
        }
        DirectSum { rep, inj, proj }
    }

    /// Map `⊕ source_k -> target` with the given components.
    pub fn copair(&self, maps: &[RepMap], target: &Rep) -> (DirectSum, RepMap) {
        let parts: Vec<Rep> = maps.iter().map(|m| m.source.clone()).collect();
        let sum = self.direct_sum(&parts);
        let mut out = RepMap::zero(self.p(), &sum.rep, target);
        for (m, pr) in maps.iter().zip(&sum.proj) {
            out = out.add(&m.after(pr));
        }
        (sum, out)
    }

    /// Map `source -> ⊕ target_k` with the given components.
    pub fn pair(&self, maps: &[RepMap], source: &Rep) -> (DirectSum, RepMap) {
        let parts: Vec<Rep> = maps.iter().map(|m| m.target.clone()).collect();
        let sum = self.direct_sum(&parts);
        let mut out = RepMap::zero(self.p(), source, &sum.rep);
        for (m, inj) in maps.iter().zip(&sum.inj) {
            out = out.add(&inj.after(m));
        }
        (sum, out)
    }

    /// Pullback of `f: X -> Z` and `g: Y -> Z`: returns `(P, P -> X, P -> Y)`.
    pub fn pullback(&self, f: &RepMap, g: &RepMap) -> (Sub, RepMap, RepMap) {
        let (sum, phi) = self.copair(&[f.clone(), g.neg()], &f.target);
        let k = self.kernel(&phi);
        let px = sum.proj[0].after(&k.incl);
        let py = sum.proj[1].after(&k.incl);
        (k, px, py)
    }

    /// Pushout of `f: W -> X` and `g: W -> Y`: returns `(Q, X -> Q, Y -> Q)`.
    pub fn pushout(&self, f: &RepMap, g: &RepMap) -> (Quotient, RepMap, RepMap) {
        let (sum, phi) = self.pair(&[f.clone(), g.neg()], &f.source);
        let q = self.cokernel(&phi);
        let ix = q.proj.after(&sum.inj[0]);
        let iy = q.proj.after(&sum.inj[1]);
        (q, ix, iy)
    }

    /// The map `⊕_k P_{v_k} -> target` sending the generator of the `k`-th
    /// summand to `elements[k] ∈ target_{v_k}`.
    pub fn map_from_projective(&self, summands: &[usize], elements: &[Vec<u32>], target: &Rep) -> RepMap {
        let p = self.p();
        let parts: Vec<Rep> = summands.iter().map(|&v| self.projective(v)).collect();
        let source = self.direct_sum(&parts).rep;
        let nv = self.vertex_count();
        let comps = (0..nv)
            .map(|w| {
                let mut cols = Vec::new();
                for (&v, el) in summands.iter().zip(elements) {
                    for path in self.path_basis(v, w) {
                        cols.push(self.path_action(target, v, path).mul_vec(el));
                    }
                }
                Mat::from_columns(p, target.dims[w], &cols)
            })
            .collect();
        RepMap {
            source,
            target: target.clone(),
            comps,
        }
    }

    /// Coordinates of the generator of summand `k` inside `⊕_k P_{v_k}` at `v_k`.
    fn generator_index(&self, summands: &[usize], k: usize) -> usize {
        let v = summands[k];
        summands[..k]
            .iter()
            .map(|&u| self.path_basis(u, v).len())
            .sum()
    }

    /// Lifts `h: ⊕ P_{v_k} -> C` through a surjection `g: B -> C`.
    pub fn lift_from_projective(&self, summands: &[usize], h: &RepMap, g: &RepMap) -> Option<RepMap> {
        let mut elements = Vec::with_capacity(summands.len());
        for (k, &v) in summands.iter().enumerate() {
            let gi = self.generator_index(summands, k);
            let image = h.comps[v].column(gi);
            elements.push(g.comps[v].solve(&image)?);
        }
        Some(self.map_from_projective(summands, &elements, &g.source))
    }

    pub fn projective_cover(&self, m: &Rep) -> ProjectiveCover {
        let p = self.p();
        let mut summands = Vec::new();
        let mut elements = Vec::new();
        for v in 0..self.vertex_count() {
            let mut rad = Mat::zeros(p, m.dims[v], 0);
            for (i, a) in self.quiver().arrows().iter().enumerate() {
                if a.target == v {
                    rad = rad.hstack(&m.mats[i]);
                }
            }
            let top = rad.cokernel_data();
            for k in 0..top.dim {
                summands.push(v);
                elements.push(top.section.column(k));
            }
        }
        let epi = self.map_from_projective(&summands, &elements, m);
        let k = self.kernel(&epi);
        ProjectiveCover {
            summands,
            p: epi.source.clone(),
            epi,
            syzygy: k.rep,
            incl: k.incl,
        }
    }

    pub fn ext_space(&self, c: &Rep, a: &Rep) -> ExtSpace {
        let cover = self.projective_cover(c);
        let hom = self.hom_space(&cover.syzygy, a);
        let from_p = self.hom_basis(&cover.p, a);
        let cols: Vec<Vec<u32>> = from_p
            .iter()
            .map(|h| hom.coords(&h.after(&cover.incl)).expect("restriction is a morphism"))
            .collect();
        let restriction = Mat::from_columns(self.p(), hom.dim(), &cols);
        let coker = restriction.cokernel_data();
        ExtSpace {
            c: c.clone(),
            a: a.clone(),
            cover,
            hom,
            coker,
        }
    }

    pub fn ext_dim(&self, c: &Rep, a: &Rep) -> usize {
        self.ext_space(c, a).dim()
    }

    /// Realizes a class as the pushout of the presentation along a cocycle.
    pub fn ext_to_conflation(&self, space: &ExtSpace, x: &[u32]) -> Conflation {
        let rho = space.representative(x);
        let (q, incl, from_p) = self.pushout(&rho, &space.cover.incl);
        let zero = RepMap::zero(self.p(), &space.a, &space.c);
        let (_, on_sum) = self.copair(&[zero, space.cover.epi.clone()], &space.c);
        let proj = q.induce(&on_sum);
        debug_assert_eq!(proj.after(&from_p), space.cover.epi);
        Conflation { incl, proj }
    }

    /// Class of a conflation `A -> B -> C` whose ends are exactly `space.a`, `space.c`.
    pub fn conflation_to_ext(&self, space: &ExtSpace, conf: &Conflation) -> Result<Vec<u32>> {
        if conf.left() != &space.a || conf.right() != &space.c {
            return Err(Error::EndpointMismatch("conflation ends differ from the Ext space".into()));
        }
        let lift = self
            .lift_from_projective(&space.cover.summands, &space.cover.epi, &conf.proj)
            .ok_or_else(|| Error::NotExact("deflation is not surjective".into()))?;
        let restricted = lift.after(&space.cover.incl);
        let comps = conf
            .incl
            .comps
            .iter()
            .zip(&restricted.comps)
            .map(|(f, h)| f.solve_matrix(h))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::NotExact("image of the inflation is not the kernel".into()))?;
        let rho = RepMap {
            source: space.cover.syzygy.clone(),
            target: space.a.clone(),
            comps,
        };
        Ok(space.class_of(&rho))
    }

    /// `a_* δ` for `a: A -> A'`, `dst` = Ext(C, A').
    pub fn ext_push(&self, src: &ExtSpace, a: &RepMap, dst: &ExtSpace, x: &[u32]) -> Vec<u32> {
        dst.class_of(&a.after(&src.representative(x)))
    }

    /// `c^* δ` for `c: C' -> C`, `dst` = Ext(C', A).
    pub fn ext_pull(&self, src: &ExtSpace, c: &RepMap, dst: &ExtSpace, x: &[u32]) -> Vec<u32> {
        let h0 = self
            .lift_from_projective(&dst.cover.summands, &c.after(&dst.cover.epi), &src.cover.epi)
            .expect("lift through a projective cover");
        let restricted = h0.after(&dst.cover.incl);
        let h1 = Sub {
            rep: src.cover.syzygy.clone(),
            incl: src.cover.incl.clone(),
        }
        .factor(&restricted)
        .expect("comparison map lands in the syzygy");
        dst.class_of(&src.representative(x).after(&h1))
    }

    /// Pushout of a conflation along `a: A -> A'`.
    pub fn push_conflation(&self, conf: &Conflation, a: &RepMap) -> Conflation {
        let (q, incl, from_b) = self.pushout(a, &conf.incl);
        let zero = RepMap::zero(self.p(), &a.target, conf.right());
        let (_, on_sum) = self.copair(&[zero, conf.proj.clone()], conf.right());
        let proj = q.induce(&on_sum);
        debug_assert_eq!(proj.after(&from_b), conf.proj);
        Conflation { incl, proj }
    }

    /// Pullback of a conflation along `c: C' -> C`.
    pub fn pull_conflation(&self, conf: &Conflation, c: &RepMap) -> Conflation {
        let (k, _, proj) = self.pullback(&conf.proj, c);
        let zero = RepMap::zero(self.p(), conf.left(), &c.source);
        let (_, into_sum) = self.pair(&[conf.incl.clone(), zero], conf.left());
        let incl = k.factor(&into_sum).expect("inflation factors through the pullback");
        Conflation { incl, proj }
    }

    pub fn split_conflation(&self, a: &Rep, c: &Rep) -> Conflation {
        let sum = self.direct_sum(&[a.clone(), c.clone()]);
        Conflation {
            incl: sum.inj[0].clone(),
            proj: sum.proj[1].clone(),
        }
    }

    fn fitting_split(&self, m: &Rep, e: &RepMap) -> Option<(Sub, Sub)> {
        let n = m.dims.iter().copied().max().unwrap_or(0).max(1);
        let en = e.pow(n);
        if en.is_zero() || en.is_iso() {
            return None;
        }
        let ker = self.kernel(&en);
        let im = self.subrep(m, en.comps.iter().map(|c| c.column_space()).collect());
        Some((ker, im))
    }

    /// Finds a nontrivial decomposition `m = K ⊕ I`, `None` if `m` is indecomposable.
    fn find_split(&self, m: &Rep, caps: &Caps) -> Result<Option<(Rep, Rep)>> {
        let end = self.hom_space(m, m);
        if end.dim() <= 1 {
            return Ok(None);
        }
        for e in &end.basis {
            if let Some((k, i)) = self.fitting_split(m, e) {
                return Ok(Some((k.rep, i.rep)));
            }
        }
        let size = space_size(self.p(), end.dim());
        if size > caps.idempotent as u128 {
            return Err(Error::CapReached(format!(
                "idempotent search in an endomorphism ring of dimension {}",
                end.dim()
            )));
        }
        // Local iff every endomorphism is nilpotent or invertible.
        for e in end.elements() {
            if let Some((k, i)) = self.fitting_split(m, &e) {
                return Ok(Some((k.rep, i.rep)));
            }
        }
        Ok(None)
    }

    pub fn is_indecomposable(&self, m: &Rep, caps: &Caps) -> Result<bool> {
        if m.is_zero() {
            return Ok(false);
        }
        Ok(self.find_split(m, caps)?.is_none())
    }

    /// Indecomposable summands (with repetition), smallest first.
    pub fn decompose(&self, m: &Rep, caps: &Caps) -> Result<Vec<Rep>> {
        let mut out = Vec::new();
        let mut stack = vec![m.clone()];
        while let Some(r) = stack.pop() {
            if r.is_zero() {
                continue;
            }
            match self.find_split(&r, caps)? {
                None => out.push(r),
                Some((a, b)) => {
                    stack.push(a);
                    stack.push(b);
                }
            }
        }
        out.sort_by(|a, b| (a.total_dim(), &a.dims).cmp(&(b.total_dim(), &b.dims)));
        Ok(out)
    }

    /// An isomorphism `m -> n` if one exists.
    pub fn is_isomorphic(&self, m: &Rep, n: &Rep, caps: &Caps) -> Result<Option<RepMap>> {
        if m.dims != n.dims {
            return Ok(None);
        }
        if m == n {
            return Ok(Some(RepMap::identity(self.p(), m)));
        }
        let hom = self.hom_space(m, n);
        if hom.dim() == 0 {
            return Ok(None);
        }
        let back = self.hom_dim(n, m);
        let end_m = self.hom_dim(m, m);
        let end_n = self.hom_dim(n, n);
        if back != hom.dim() || end_m != hom.dim() || end_n != hom.dim() {
            return Ok(None);
        }
        for b in &hom.basis {
            if b.is_iso() {
                return Ok(Some(b.clone()));
            }
        }
        if space_size(self.p(), hom.dim()) > caps.iso as u128 {
            return Err(Error::CapReached(format!(
                "isomorphism search in a Hom space of dimension {}",
                hom.dim()
            )));
        }
        let iso = hom.elements().find(|f| f.is_iso());
        Ok(iso)
    }

    /// All indecomposables with dimension vector bounded by `bounds`, found by
    /// enumerating every arrow-matrix tuple.
    pub fn enumerate_indecomposables(&self, bounds: &[usize], caps: &Caps) -> Catalog {
        let p = self.p();
        let nv = self.vertex_count();
        let arrows = self.quiver().arrows().to_vec();
        let mut found: Vec<Rep> = Vec::new();
        let mut caps_hit = Vec::new();
        for dims in dim_vectors(bounds) {
            let shapes: Vec<(usize, usize)> = arrows.iter().map(|a| (dims[a.target], dims[a.source])).collect();
            let entries: usize = shapes.iter().map(|(r, c)| r * c).sum();
            if space_size(p, entries) > caps.tuples as u128 {
                caps_hit.push(format!("tuple enumeration skipped dimension vector {dims:?}"));
                continue;
            }
            for v in VectorIter::new(p, entries) {
                let mut mats = Vec::with_capacity(shapes.len());
                let mut off = 0;
                for &(r, c) in &shapes {
                    mats.push(Mat::new(p, r, c, v[off..off + r * c].to_vec()));
                    off += r * c;
                }
                let rep = Rep { dims: dims.clone(), mats };
                if self.validate_rep(&rep).is_err() {
                    continue;
                }
                self.consider(rep, &mut found, &mut caps_hit, caps);
            }
        }
        debug_assert!(found.iter().all(|r| r.dims.len() == nv));
        Catalog::from_found(found, caps_hit)
    }

    /// Adds `rep` to `found` if it is indecomposable and new up to isomorphism.
    pub fn consider(&self, rep: Rep, found: &mut Vec<Rep>, caps_hit: &mut Vec<String>, caps: &Caps) {
        match self.is_indecomposable(&rep, caps) {
            Ok(false) => return,
            Ok(true) => {}
            Err(e) => {
                let msg = e.to_string();
                if !caps_hit.contains(&msg) {
                    caps_hit.push(msg);
                }
                return;
            }
        }
        for old in found.iter().filter(|o| o.dims == rep.dims) {
            match self.is_isomorphic(old, &rep, caps) {
                Ok(Some(_)) => return,
                Ok(None) => {}
                Err(e) => {
                    let msg = e.to_string();
                    if !caps_hit.contains(&msg) {
                        caps_hit.push(msg);
                    }
                    return;
                }
            }
        }
        found.push(rep);
    }
}

/// Nonzero dimension vectors below `bounds`, ordered by total dimension then lexicographically.
pub fn dim_vectors(bounds: &[usize]) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = vec![Vec::new()];
    for &b in bounds {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..=b).map(move |d| {
                    let mut w = v.clone();
                    w.push(d);
                    w
                })
            })
            .collect();
    }
    out.retain(|v| v.iter().any(|&d| d > 0));
    out.sort_by(|a, b| (a.iter().sum::<usize>(), a).cmp(&(b.iter().sum::<usize>(), b)));
    out
}

/// Pairwise non-isomorphic indecomposables with canonical names and aliases.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Catalog {
    pub objects: Vec<Rep>,
    pub names: Vec<String>,
    pub aliases: Vec<Vec<String>>,
    /// Searches that ran into a cap while the catalog was built.
    pub caps_hit: Vec<String>,
}

impl Catalog {
    /// Sorts by total dimension, then dimension vector, then discovery order.
    pub fn from_found(found: Vec<Rep>, caps_hit: Vec<String>) -> Catalog {
        let mut indexed: Vec<(usize, Rep)> = found.into_iter().enumerate().collect();
        indexed.sort_by(|(i, a), (j, b)| {
            (a.total_dim(), &a.dims, i).cmp(&(b.total_dim(), &b.dims, j))
        });
        let objects: Vec<Rep> = indexed.into_iter().map(|(_, r)| r).collect();
        let names = (1..=objects.len()).map(|k| format!("M{k}")).collect();
        let aliases = vec![Vec::new(); objects.len()];
        Catalog {
            objects,
            names,
            aliases,
            caps_hit,
        }
    }

    pub fn len(&self) -> usize {
        self.objects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    pub fn is_complete(&self) -> bool {
        self.caps_hit.is_empty()
    }

    pub fn add_alias(&mut self, index: usize, alias: impl Into<String>) {
        let alias = alias.into();
        if !self.aliases[index].contains(&alias) {
            self.aliases[index].push(alias);
        }
    }

    /// The preferred display name: first alias, else the canonical name.
    pub fn label(&self, index: usize) -> &str {
        self.aliases[index].first().unwrap_or(&self.names[index])
    }

    pub fn resolve(&self, name: &str) -> Result<usize> {
        let name = name.trim();
        if let Some(i) = self.names.iter().position(|n| n == name) {
            return Ok(i);
        }
        self.aliases
            .iter()
            .position(|al| al.iter().any(|a| a == name))
            .ok_or_else(|| Error::UnknownName(name.to_string()))
    }

    pub fn alias_table(&self) -> BTreeMap<String, usize> {
        let mut out = BTreeMap::new();
        for (i, al) in self.aliases.iter().enumerate() {
            for a in al {
                out.insert(a.clone(), i);
            }
        }
        out
    }
}

/// A module category with its catalog and memoized identifications.
#[derive(Debug)]
pub struct ModCat {
    pub algebra: Algebra,
    pub catalog: Catalog,
    pub caps: Caps,
    ident: Mutex<HashMap<Rep, Result<Vec<usize>>>>,
    ext: Mutex<HashMap<(usize, usize), Arc<ExtSpace>>>,
    tables: Mutex<Option<(Vec<Vec<usize>>, Vec<Vec<usize>>)>>,
}

impl ModCat {
    pub fn new(algebra: Algebra, catalog: Catalog, caps: Caps) -> Self {
        ModCat {
            algebra,
            catalog,
            caps,
            ident: Mutex::new(HashMap::new()),
            ext: Mutex::new(HashMap::new()),
            tables: Mutex::new(None),
        }
    }

    /// Builds the catalog by tuple enumeration.
    pub fn build(algebra: Algebra, caps: Caps) -> Self {
        let bounds = if caps.bounds.is_empty() {
            vec![2; algebra.vertex_count()]
        } else {
            caps.bounds.clone()
        };
        let catalog = algebra.enumerate_indecomposables(&bounds, &caps);
        ModCat::new(algebra, catalog, caps)
    }

    pub fn p(&self) -> u32 {
        self.algebra.p()
    }

    pub fn len(&self) -> usize {
        self.catalog.len()
    }

    pub fn is_empty(&self) -> bool {
        self.catalog.is_empty()
    }

    pub fn object(&self, i: usize) -> &Rep {
        &self.catalog.objects[i]
    }

    pub fn label(&self, i: usize) -> &str {
        self.catalog.label(i)
    }

    /// Catalog indices of the indecomposable summands of `m` (sorted, with repetition).
    pub fn decompose_indices(&self, m: &Rep) -> Result<Vec<usize>> {
        if m.is_zero() {
            return Ok(Vec::new());
        }
        if let Some(hit) = self.ident.lock().unwrap().get(m) {
            return hit.clone();
        }
        let res = self.decompose_uncached(m);
        self.ident.lock().unwrap().insert(m.clone(), res.clone());
        res
    }

    fn decompose_uncached(&self, m: &Rep) -> Result<Vec<usize>> {
        if let Some(i) = self.catalog.objects.iter().position(|o| o == m) {
            return Ok(vec![i]);
        }
        let parts = self.algebra.decompose(m, &self.caps)?;
        let mut out = Vec::with_capacity(parts.len());
        for part in parts {
            out.push(self.identify_indecomposable(&part)?);
        }
        out.sort_unstable();
        Ok(out)
    }

    fn identify_indecomposable(&self, part: &Rep) -> Result<usize> {
        for (i, o) in self.catalog.objects.iter().enumerate() {
            if o.dims == part.dims && self.algebra.is_isomorphic(o, part, &self.caps)?.is_some() {
                return Ok(i);
            }
        }
        Err(Error::CapReached(format!(
            "indecomposable summand with dimension vector {:?} lies outside the catalog bounds",
            part.dims
        )))
    }

    /// Catalog index of an indecomposable `m`.
    pub fn identify(&self, m: &Rep) -> Result<usize> {
        let idx = self.decompose_indices(m)?;
        if idx.len() == 1 {
            Ok(idx[0])
        } else {
            Err(Error::BadRep(format!("expected an indecomposable, found {} summands", idx.len())))
        }
    }

    /// Human-readable decomposition such as `P1 ⊕ S2^2`, or `0`.
    pub fn describe(&self, m: &Rep) -> String {
        match self.decompose_indices(m) {
            Ok(idx) => self.describe_indices(&idx),
            Err(_) => format!("<unidentified {:?}>", m.dims),
        }
    }

    pub fn describe_indices(&self, idx: &[usize]) -> String {
        if idx.is_empty() {
            return "0".into();
        }
        let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
        for &i in idx {
            *counts.entry(i).or_default() += 1;
        }
        counts
            .into_iter()
            .map(|(i, c)| {
                if c == 1 {
                    self.label(i).to_string()
                } else {
                    format!("{}^{}", self.label(i), c)
                }
            })
            .collect::<Vec<_>>()
            .join(" ⊕ ")
    }

    pub fn ext_space_of(&self, c: usize, a: usize) -> Arc<ExtSpace> {
        if let Some(s) = self.ext.lock().unwrap().get(&(c, a)) {
            return s.clone();
        }
        let s = Arc::new(self.algebra.ext_space(self.object(c), self.object(a)));
        self.ext.lock().unwrap().insert((c, a), s.clone());
        s
    }

    fn ensure_tables(&self) -> (Vec<Vec<usize>>, Vec<Vec<usize>>) {
        if let Some(t) = self.tables.lock().unwrap().as_ref() {
            return t.clone();
        }
        let n = self.len();
        let mut hom = vec![vec![0; n]; n];
        let mut ext = vec![vec![0; n]; n];
        for i in 0..n {
            for j in 0..n {
                hom[i][j] = self.algebra.hom_dim(self.object(i), self.object(j));
                ext[i][j] = self.ext_space_of(i, j).dim();
            }
        }
        let t = (hom, ext);
        *self.tables.lock().unwrap() = Some(t.clone());
        t
    }

    /// `hom[i][j] = dim Hom(M_i, M_j)`.
    pub fn hom_table(&self) -> Vec<Vec<usize>> {
        self.ensure_tables().0
    }

    /// `ext[i][j] = dim Ext¹(M_i, M_j)`.
    pub fn ext_table(&self) -> Vec<Vec<usize>> {
        self.ensure_tables().1
    }

    pub fn hom_dim(&self, i: usize, j: usize) -> usize {
        self.ensure_tables().0[i][j]
    }

    pub fn ext_dim(&self, i: usize, j: usize) -> usize {
        self.ensure_tables().1[i][j]
    }

    /// Indices of the projective objects of the category (Ext¹(P, -) = 0).
    pub fn projectives(&self) -> Vec<usize> {
        let ext = self.ext_table();
        (0..self.len()).filter(|&i| ext[i].iter().all(|&d| d == 0)).collect()
    }

    pub fn injectives(&self) -> Vec<usize> {
        let ext = self.ext_table();
        (0..self.len()).filter(|&i| (0..self.len()).all(|j| ext[j][i] == 0)).collect()
    }
}
