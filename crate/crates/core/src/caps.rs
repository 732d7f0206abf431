use serde::{Deserialize, Serialize};

/// Enumeration and search limits. Every verdict that depends on a bounded
/// search reports which of these it ran into.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct Caps {
    /// Largest endomorphism space (in elements) searched exhaustively for idempotents.
    pub idempotent: u64,
    /// Largest Hom space (in elements) searched for an isomorphism.
    pub iso: u64,
    /// Largest number of arrow-matrix tuples tried per dimension vector.
    pub tuples: u64,
    /// Largest Ext group (in elements) swept exhaustively; larger groups are sampled.
    pub ext_sweep: u64,
    /// Largest Hom space (in elements) swept exhaustively in condition checks.
    pub hom_sweep: u64,
    /// Per-vertex dimension bound for module catalogs (empty = 2 everywhere).
    pub bounds: Vec<usize>,
    /// Summand bound for objects of a morphism category catalog.
    pub multiplicity: usize,
    /// Multiplicity bound in approximation brute force.
    pub approx_multiplicity: usize,
    /// Extra total dimension allowed in approximation brute force.
    pub approx_extra_dim: usize,
    /// Largest catalog for which cotorsion pairs are enumerated.
    pub subset_limit: usize,
    /// Number of composable pairs drawn for the WIC spot-check.
    pub wic_sample: usize,
    /// Seed for sampled sweeps.
    pub seed: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            idempotent: 1 << 20,
            iso: 1 << 20,
            tuples: 1 << 20,
            ext_sweep: 1 << 12,
            hom_sweep: 1 << 12,
            bounds: Vec::new(),
            multiplicity: 2,
            approx_multiplicity: 2,
            approx_extra_dim: 8,
            subset_limit: 12,
            wic_sample: 400,
            seed: 0,
        }
    }
}
