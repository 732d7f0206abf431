#![allow(dead_code)]

use std::collections::HashSet;
use std::sync::Arc;

use extricat_core::algebra::a2;
use extricat_core::morphcat::{morphism_catalog, triangular_matrix_algebra, MorphismCategory};
use extricat_core::recollement::RecollementScenario;
use extricat_core::{Algebra, Caps, Mat, ModCat, Rep, Subcat};

pub struct Fixture {
    pub mc: Arc<MorphismCategory>,
    pub s: RecollementScenario,
}

fn map_name(src: &str, tgt: &str) -> Option<String> {
    match (src, tgt) {
        ("S2", "P1") => Some("phi".into()),
        ("P1", "S1") => Some("psi".into()),
        _ => None,
    }
}

/// `mod A`, `mod T₂(A)` for `A = kA₂`, with names `S1`, `S2`, `P1` and triple names.
pub fn morphism_category() -> Arc<MorphismCategory> {
    let caps = Caps::default();
    let alg = a2(2).unwrap();
    let mut cat = alg.enumerate_indecomposables(&[2, 2], &caps);
    for i in 0..cat.len() {
        let name = match cat.objects[i].dims.as_slice() {
            [1, 0] => "S1",
            [0, 1] => "S2",
            [1, 1] => "P1",
            other => panic!("unexpected {other:?}"),
        };
        cat.add_alias(i, name);
    }
    let base = Arc::new(ModCat::new(alg.clone(), cat, caps.clone()));
    let t2 = triangular_matrix_algebra(&alg).unwrap();
    let mut middle = morphism_catalog(&base, &t2, &caps);
    let shell = MorphismCategory::from_parts(base.clone(), Arc::new(ModCat::new(t2.clone(), middle.clone(), caps.clone())));
    MorphismCategory::alias_middle(&mut middle, &shell, &map_name);
    Arc::new(MorphismCategory::from_parts(base, Arc::new(ModCat::new(t2, middle, caps))))
}

pub fn abelian() -> Fixture {
    let mc = morphism_category();
    Fixture {
        s: RecollementScenario::abelian(mc.clone()),
        mc,
    }
}

pub const X_OBJECTS: [&str; 8] = ["S2|0", "P1|0", "S1|0", "P1|P1_1", "S1|P1_psi", "S1|S1_1", "0|P1", "0|S1"];

pub fn extriangulated() -> Fixture {
    let mc = morphism_category();
    let b = names(&mc.middle, &X_OBJECTS);
    let c = names(&mc.base, &["S1", "P1"]);
    let s = RecollementScenario::new(mc.clone(), Subcat::full(mc.base.len()), b, c);
    Fixture { mc, s }
}

pub fn idx(cat: &ModCat, name: &str) -> usize {
    cat.catalog.resolve(name).unwrap()
}

pub fn names(cat: &ModCat, list: &[&str]) -> Subcat {
    Subcat::of(list.iter().map(|n| idx(cat, n)))
}

pub fn all_but(cat: &ModCat, list: &[&str]) -> Subcat {
    let out = names(cat, list);
    Subcat::of((0..cat.len()).filter(|i| !out.contains(*i)))
}

// ---- brute-force oracles, written against raw matrix entries

#[derive(Clone, PartialEq, Eq, Hash)]
struct Dense {
    rows: usize,
    cols: usize,
    e: Vec<u32>,
}

impl Dense {
    fn zeros(rows: usize, cols: usize) -> Dense {
        Dense { rows, cols, e: vec![0; rows * cols] }
    }

    fn identity(n: usize) -> Dense {
        let mut d = Dense::zeros(n, n);
        for i in 0..n {
            d.e[i * n + i] = 1;
        }
        d
    }

    fn at(&self, r: usize, c: usize) -> u32 {
        self.e[r * self.cols + c]
    }

    fn put(&mut self, r: usize, c: usize, v: u32) {
        self.e[r * self.cols + c] = v;
    }

    fn is_zero(&self) -> bool {
        self.e.iter().all(|&x| x == 0)
    }
}

fn dense(rep: &Rep, a: usize) -> Dense {
    let m = &rep.mats[a];
    let mut d = Dense::zeros(m.rows(), m.cols());
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            d.put(r, c, m.get(r, c));
        }
    }
    d
}

fn mul(p: u32, a: &Dense, b: &Dense) -> Dense {
    assert_eq!(a.cols, b.rows);
    let mut out = Dense::zeros(a.rows, b.cols);
    for i in 0..a.rows {
        for j in 0..b.cols {
            let mut s = 0u64;
            for k in 0..a.cols {
                s += a.at(i, k) as u64 * b.at(k, j) as u64;
            }
            out.put(i, j, (s % p as u64) as u32);
        }
    }
    out
}

fn combine(p: u32, a: &Dense, b: &Dense, cb: u32) -> Dense {
    let e = a.e.iter().zip(&b.e).map(|(x, y)| (x + cb * y) % p).collect();
    Dense { rows: a.rows, cols: a.cols, e }
}

fn all_vectors(p: u32, len: usize) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..p).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

fn log_p(p: u32, mut n: usize) -> usize {
    let mut d = 0;
    while n > 1 {
        assert_eq!(n % p as usize, 0, "not a power of p");
        n /= p as usize;
        d += 1;
    }
    d
}

// splits a flat vector into matrices of the given shapes
fn unpack(shapes: &[(usize, usize)], v: &[u32]) -> Vec<Dense> {
    let mut off = 0;
    shapes
        .iter()
        .map(|&(r, c)| {
            let d = Dense { rows: r, cols: c, e: v[off..off + r * c].to_vec() };
            off += r * c;
            d
        })
        .collect()
}

/// `dim Hom(M, N)` by enumerating every family of vertex maps.
pub fn brute_hom_dim(alg: &Algebra, m: &Rep, n: &Rep) -> usize {
    let p = alg.p();
    let nv = alg.vertex_count();
    let shapes: Vec<(usize, usize)> = (0..nv).map(|v| (n.dims[v], m.dims[v])).collect();
    let len: usize = shapes.iter().map(|(r, c)| r * c).sum();
    let mut count = 0;
    for v in all_vectors(p, len) {
        let f = unpack(&shapes, &v);
        let ok = alg.quiver().arrows().iter().enumerate().all(|(a, arr)| {
            mul(p, &dense(n, a), &f[arr.source]) == mul(p, &f[arr.target], &dense(m, a))
        });
        if ok {
            count += 1;
        }
    }
    log_p(p, count)
}

fn path_matrix(p: u32, alg: &Algebra, mats: &[Dense], dims: &[usize], path: &[usize]) -> Dense {
    let arrows = alg.quiver().arrows();
    let mut acc = Dense::identity(dims[arrows[path[0]].source]);
    for &a in path {
        acc = mul(p, &mats[a], &acc);
    }
    acc
}

fn satisfies_relations(alg: &Algebra, mats: &[Dense], dims: &[usize]) -> bool {
    let p = alg.p();
    alg.relations().iter().all(|rel| {
        let mut sum: Option<Dense> = None;
        for (c, path) in &rel.terms {
            let m = path_matrix(p, alg, mats, dims, path);
            sum = Some(match sum {
                None => combine(p, &Dense::zeros(m.rows, m.cols), &m, *c),
                Some(s) => combine(p, &s, &m, *c),
            });
        }
        sum.unwrap().is_zero()
    })
}

fn block_mats(alg: &Algebra, m: &Rep, n: &Rep, xs: &[Dense]) -> Vec<Dense> {
    alg.quiver()
        .arrows()
        .iter()
        .enumerate()
        .map(|(a, arr)| {
            let (ns, nt, ms, mt) = (n.dims[arr.source], n.dims[arr.target], m.dims[arr.source], m.dims[arr.target]);
            let mut e = Dense::zeros(nt + mt, ns + ms);
            let na = dense(n, a);
            let ma = dense(m, a);
            for i in 0..nt {
                for j in 0..ns {
                    e.put(i, j, na.at(i, j));
                }
                for j in 0..ms {
                    e.put(i, ns + j, xs[a].at(i, j));
                }
            }
            for i in 0..mt {
                for j in 0..ms {
                    e.put(nt + i, ns + j, ma.at(i, j));
                }
            }
            e
        })
        .collect()
}

/// Middle terms `[[N, X], [0, M]]` of every extension of `M` by `N`, one per cocycle.
pub fn extension_middles(alg: &Algebra, m: &Rep, n: &Rep) -> Vec<Rep> {
    let p = alg.p();
    let nv = alg.vertex_count();
    let dims: Vec<usize> = (0..nv).map(|v| n.dims[v] + m.dims[v]).collect();
    let shapes: Vec<(usize, usize)> = alg.quiver().arrows().iter().map(|a| (n.dims[a.target], m.dims[a.source])).collect();
    let len: usize = shapes.iter().map(|(r, c)| r * c).sum();
    all_vectors(p, len)
        .into_iter()
        .map(|v| block_mats(alg, m, n, &unpack(&shapes, &v)))
        .filter(|mats| satisfies_relations(alg, mats, &dims))
        .map(|mats| Rep { dims: dims.clone(), mats: mats.iter().map(|d| to_mat(p, d)).collect() })
        .collect()
}

/// `dim Ext¹(M, N)`: block upper-triangular extensions `[[N, X], [0, M]]`
/// satisfying the relations, modulo the coboundaries `N h - h M`.
pub fn brute_ext_dim(alg: &Algebra, m: &Rep, n: &Rep) -> usize {
    let p = alg.p();
    let arrows = alg.quiver().arrows();
    let nv = alg.vertex_count();
    let cocycles = extension_middles(alg, m, n).len();
    let hshapes: Vec<(usize, usize)> = (0..nv).map(|v| (n.dims[v], m.dims[v])).collect();
    let hlen: usize = hshapes.iter().map(|(r, c)| r * c).sum();
    let mut boundaries = HashSet::new();
    for v in all_vectors(p, hlen) {
        let h = unpack(&hshapes, &v);
        let b: Vec<Dense> = arrows
            .iter()
            .enumerate()
            .map(|(a, arr)| {
                let l = mul(p, &dense(n, a), &h[arr.source]);
                let r = mul(p, &h[arr.target], &dense(m, a));
                combine(p, &l, &r, p - 1)
            })
            .collect();
        boundaries.insert(b);
    }
    log_p(p, cocycles) - log_p(p, boundaries.len())
}

/// Multiplicities of the catalog indecomposables in `m`, recovered from the
/// vector `dim Hom(X, m)` over all catalog objects `X` (a module of finite
/// representation type is determined by these numbers).
pub fn multiplicities(cat: &ModCat, m: &Rep) -> Vec<usize> {
    let alg = &cat.algebra;
    let target: Vec<usize> = (0..cat.len()).map(|x| brute_hom_dim(alg, cat.object(x), m)).collect();
    let table: Vec<Vec<usize>> = (0..cat.len())
        .map(|i| (0..cat.len()).map(|x| brute_hom_dim(alg, cat.object(x), cat.object(i))).collect())
        .collect();
    let mut hits = Vec::new();
    let mut mult = vec![0; cat.len()];
    search(cat, &table, &target, m, 0, &mut mult, &mut hits);
    assert_eq!(hits.len(), 1, "hom vector does not determine a unique decomposition");
    hits.pop().unwrap()
}

fn search(cat: &ModCat, table: &[Vec<usize>], target: &[usize], m: &Rep, i: usize, mult: &mut Vec<usize>, hits: &mut Vec<Vec<usize>>) {
    let used: Vec<usize> = (0..m.dims.len())
        .map(|v| (0..i).map(|k| mult[k] * cat.object(k).dims[v]).sum())
        .collect();
    if used.iter().zip(&m.dims).any(|(u, d)| u > d) {
        return;
    }
    if i == cat.len() {
        if used == m.dims {
            let hv: Vec<usize> = (0..cat.len()).map(|x| (0..cat.len()).map(|k| mult[k] * table[k][x]).sum()).collect();
            if hv == target {
                hits.push(mult.clone());
            }
        }
        return;
    }
    let total: usize = m.dims.iter().sum();
    for k in 0..=total {
        mult[i] = k;
        search(cat, table, target, m, i + 1, mult, hits);
    }
    mult[i] = 0;
}

/// Whether every extension between objects of `sub` has its middle term in `add(sub)`.
pub fn oracle_extension_closed(cat: &ModCat, sub: &Subcat) -> bool {
    sub.iter().all(|c| {
        sub.iter().all(|a| {
            extension_middles(&cat.algebra, cat.object(c), cat.object(a)).iter().all(|e| {
                multiplicities(cat, e).iter().enumerate().all(|(i, &k)| k == 0 || sub.contains(i))
            })
        })
    })
}

/// Right perpendicular of `t` inside `carrier`, from the brute-force Ext oracle.
pub fn oracle_right_perp(cat: &ModCat, carrier: &Subcat, t: &Subcat) -> Subcat {
    Subcat::of(carrier.iter().filter(|&m| {
        t.iter()
            .all(|x| brute_ext_dim(&cat.algebra, cat.object(x), cat.object(m)) == 0)
    }))
}

pub fn oracle_left_perp(cat: &ModCat, carrier: &Subcat, f: &Subcat) -> Subcat {
    Subcat::of(carrier.iter().filter(|&m| {
        f.iter()
            .all(|x| brute_ext_dim(&cat.algebra, cat.object(m), cat.object(x)) == 0)
    }))
}

// ---- approximation oracle: enumerate maps, build kernels and cokernels by hand

fn to_mat(p: u32, d: &Dense) -> Mat {
    Mat::new(p, d.rows, d.cols, d.e.clone())
}

/// Every morphism `M -> N`, as families of vertex matrices.
pub fn brute_maps(alg: &Algebra, m: &Rep, n: &Rep) -> Vec<Vec<Mat>> {
    let p = alg.p();
    let nv = alg.vertex_count();
    let shapes: Vec<(usize, usize)> = (0..nv).map(|v| (n.dims[v], m.dims[v])).collect();
    let len: usize = shapes.iter().map(|(r, c)| r * c).sum();
    let mut out = Vec::new();
    for v in all_vectors(p, len) {
        let f = unpack(&shapes, &v);
        let ok = alg.quiver().arrows().iter().enumerate().all(|(a, arr)| {
            mul(p, &dense(n, a), &f[arr.source]) == mul(p, &f[arr.target], &dense(m, a))
        });
        if ok {
            out.push(f.iter().map(|d| to_mat(p, d)).collect());
        }
    }
    out
}

/// True when the vertex matrices commute with every arrow.
pub fn is_morphism(alg: &Algebra, m: &Rep, n: &Rep, comps: &[Mat]) -> bool {
    alg.quiver().arrows().iter().enumerate().all(|(a, arr)| {
        n.mats[a].mul(&comps[arr.source]).to_rows() == comps[arr.target].mul(&m.mats[a]).to_rows()
    })
}

pub fn kernel_rep(alg: &Algebra, m: &Rep, comps: &[Mat]) -> Rep {
    let bases: Vec<Mat> = comps.iter().map(|f| f.kernel_matrix()).collect();
    let dims = bases.iter().map(|b| b.cols()).collect();
    let mats = alg
        .quiver()
        .arrows()
        .iter()
        .enumerate()
        .map(|(a, arr)| {
            let image = m.mats[a].mul(&bases[arr.source]);
            bases[arr.target].solve_matrix(&image).expect("kernel is a subrepresentation")
        })
        .collect();
    Rep { dims, mats }
}

pub fn cokernel_rep(alg: &Algebra, n: &Rep, comps: &[Mat]) -> Rep {
    let data: Vec<_> = comps.iter().map(|f| f.cokernel_data()).collect();
    let dims = data.iter().map(|c| c.dim).collect();
    let mats = alg
        .quiver()
        .arrows()
        .iter()
        .enumerate()
        .map(|(a, arr)| data[arr.target].proj.mul(&n.mats[a]).mul(&data[arr.source].section))
        .collect();
    Rep { dims, mats }
}

/// Every direct sum of the given objects with multiplicities up to `max`.
pub fn sums(cat: &ModCat, objs: &[usize], max: usize) -> Vec<Rep> {
    let mut out = vec![cat.algebra.zero_rep()];
    for &o in objs {
        let mut next = Vec::new();
        for base in &out {
            let mut acc = base.clone();
            next.push(acc.clone());
            for _ in 0..max {
                acc = acc.direct_sum(cat.object(o));
                next.push(acc.clone());
            }
        }
        out = next;
    }
    out
}

fn ext_free(cat: &ModCat, left: &[usize], m: &Rep) -> bool {
    left.iter().all(|&x| brute_ext_dim(&cat.algebra, cat.object(x), m) == 0)
}

fn ext_free_into(cat: &ModCat, m: &Rep, right: &[usize]) -> bool {
    right.iter().all(|&x| brute_ext_dim(&cat.algebra, m, cat.object(x)) == 0)
}

/// Searches for `0 -> K -> T' -> C -> 0` with `T'` a sum of `t` and `K` Ext-orthogonal to `t`
/// (so `K` lies in `F` whenever `F` is the right perpendicular of `t`).
pub fn oracle_right_approx_exists(cat: &ModCat, c: &Rep, t: &[usize], max: usize) -> bool {
    let alg = &cat.algebra;
    sums(cat, t, max).iter().any(|tp| {
        brute_maps(alg, tp, c).iter().any(|f| {
            f.iter().zip(&c.dims).all(|(fv, &d)| fv.rank() == d) && ext_free(cat, t, &kernel_rep(alg, tp, f))
        })
    })
}

pub fn oracle_left_approx_exists(cat: &ModCat, c: &Rep, f: &[usize], max: usize) -> bool {
    let alg = &cat.algebra;
    sums(cat, f, max).iter().any(|fp| {
        brute_maps(alg, c, fp).iter().any(|g| {
            g.iter().zip(&c.dims).all(|(gv, &d)| gv.rank() == d) && ext_free_into(cat, &cokernel_rep(alg, fp, g), f)
        })
    })
}

/// Checks a short exact sequence `A -> B -> C` directly on matrices.
pub fn is_short_exact(alg: &Algebra, incl: &[Mat], a: &Rep, b: &Rep, proj: &[Mat], c: &Rep) -> bool {
    is_morphism(alg, a, b, incl)
        && is_morphism(alg, b, c, proj)
        && (0..alg.vertex_count()).all(|v| {
            incl[v].rank() == a.dims[v]
                && proj[v].rank() == c.dims[v]
                && a.dims[v] + c.dims[v] == b.dims[v]
                && proj[v].mul(&incl[v]).is_zero()
        })
}

/// Membership in `left^⊥`, by the Ext oracle.
pub fn in_right_perp(cat: &ModCat, left: &Subcat, m: &Rep) -> bool {
    ext_free(cat, &left.iter().collect::<Vec<_>>(), m)
}

pub fn in_left_perp(cat: &ModCat, right: &Subcat, m: &Rep) -> bool {
    ext_free_into(cat, m, &right.iter().collect::<Vec<_>>())
}
