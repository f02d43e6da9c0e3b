//! The JSON invariant report.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::Result;
use crate::poly::IntPoly;
use crate::ring::RingElement;

use super::{
    betti_kunneth, betti_numbers, clique_number, curvature, dimension, element_fermi, euler_characteristic,
    euler_polynomial, f_matrix, f_vector, interaction_betti, wu_characteristic, CurvatureMap, WuSemantics,
};

#[derive(Clone, Debug)]
pub struct ReportOptions {
    /// Exact Betti numbers (and Poincaré polynomial).
    pub betti: bool,
    /// Assemble Betti numbers from factor ranks instead of ranks on the full term.
    pub betti_kunneth: bool,
    /// Orders of the Wu characteristics to include.
    pub wu: Vec<usize>,
    pub wu_semantics: WuSemantics,
    pub curvature: bool,
    /// Interaction Betti numbers, only for single complexes up to this many cells.
    pub interaction_cap: Option<usize>,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions {
            betti: false,
            betti_kunneth: true,
            wu: vec![2],
            wu_semantics: WuSemantics::Pairwise,
            curvature: false,
            interaction_cap: None,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct InvariantReport {
    pub chi: i64,
    pub fermi: i64,
    pub wu: BTreeMap<String, i64>,
    pub f_vector: Vec<i64>,
    pub euler_polynomial: IntPoly,
    pub f_matrix: Vec<Vec<i64>>,
    pub betti: Option<Vec<i64>>,
    pub poincare_polynomial: Option<IntPoly>,
    pub interaction_betti: Option<Vec<i64>>,
    /// Inductive dimension of each term, as a reduced fraction.
    pub dim_inductive: Vec<String>,
    pub clique_number: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub curvature: Option<CurvatureMap>,
}

pub fn invariant_report(e: &RingElement, opts: &ReportOptions) -> Result<InvariantReport> {
    let mut wu = BTreeMap::new();
    for &k in &opts.wu {
        wu.insert(k.to_string(), wu_characteristic(e, k, opts.wu_semantics)?);
    }
    let (betti, poincare_polynomial) = if opts.betti {
        let b = if opts.betti_kunneth { betti_kunneth(e) } else { betti_numbers(e) };
        (Some(b.betti), Some(b.poincare))
    } else {
        (None, None)
    };
    let interaction = match (opts.interaction_cap, e.terms()) {
        (Some(cap), [(1, t)]) if t.factors().len() == 1 => Some(interaction_betti(&t.factors()[0], cap)?),
        _ => None,
    };
    let dim_inductive =
        e.terms().iter().map(|(_, t)| dimension(t).map(|d| d.to_string())).collect::<Result<Vec<_>>>()?;
    Ok(InvariantReport {
        chi: euler_characteristic(e),
        fermi: element_fermi(e),
        wu,
        f_vector: f_vector(e),
        euler_polynomial: euler_polynomial(e),
        f_matrix: f_matrix(e),
        betti,
        poincare_polynomial,
        interaction_betti: interaction,
        dim_inductive,
        clique_number: clique_number(e),
        curvature: opts.curvature.then(|| curvature(e)),
    })
}
