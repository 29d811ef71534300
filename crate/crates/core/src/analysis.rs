//! Singularity classification of an affine toric variety given by a cone
//! `C = σ^∨` in `M`.

use serde::Serialize;

use crate::cone::{require_pointed_full, Cone};
use crate::hilbert::hilbert_basis;
use crate::int::Int;
use crate::linalg::{lattice_index, smith_normal_form, solve_integer};
use crate::matrix::IntMatrix;
use crate::Result;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AnalysisReport {
    pub rank: usize,
    pub simplicial: bool,
    /// Lattice index of the rays; only for simplicial cones.
    pub index: Option<Int>,
    pub gorenstein: bool,
    /// `m` with `<m, ρ> = 1` for every primitive ray `ρ` of `σ`.
    pub gorenstein_witness: Option<Vec<Int>>,
    pub cyclic_quotient: bool,
    /// Invariant factors of the ray matrix of `σ`.
    pub invariant_factors: Vec<Int>,
    pub hilbert_basis_size: usize,
    pub hypersurface: bool,
    pub saturated: bool,
    pub unimodular: bool,
}

pub fn analyze(c: &Cone) -> Result<AnalysisReport> {
    require_pointed_full(c)?;
    let n = c.ambient_dim();
    let simplicial = c.is_simplicial();
    let index = if simplicial {
        Some(lattice_index(&c.ray_matrix()?)?)
    } else {
        None
    };
    // rays of σ are the facet normals of C
    let sigma_rays = IntMatrix::from_columns(c.facets())?;
    let witness = solve_integer(&sigma_rays.transpose(), &vec![Int::ONE; c.facets().len()])?;
    let invariant_factors = smith_normal_form(&sigma_rays).invariant_factors;
    let nontrivial = invariant_factors.iter().filter(|d| !d.is_one()).count();
    let hb = hilbert_basis(c)?;
    Ok(AnalysisReport {
        rank: n,
        simplicial,
        index,
        gorenstein: witness.is_some(),
        gorenstein_witness: witness,
        cyclic_quotient: simplicial && nontrivial <= 1,
        invariant_factors,
        hilbert_basis_size: hb.len(),
        hypersurface: hb.len() == n + 1,
        // C ∩ M is saturated by construction
        saturated: true,
        unimodular: c.is_unimodular(),
    })
}
