use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::chart_field;
use crate::error::{ScenarioError, SpectraError};
use crate::field::{count_nodal_domains, Chart, CrackSet, Refinement};
use crate::spectra::{enumerate_spectrum, Combination, Domain, DomainSpec, DISK_LIMIT};

const AUDIT_REFINEMENTS: usize = 3;

/// Nodal count of one pure eigenfunction against its Courant bound.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuditRow {
    pub mode: String,
    pub eigenvalue: f64,
    /// Courant bound: minimal index of the eigenvalue.
    pub kappa: usize,
    pub multiplicity: usize,
    pub beta0: usize,
    pub stable: bool,
    pub ok: bool,
}

// Smallest limit that covers `entries` distinct eigenvalues.
fn spectrum_prefix(domain: &DomainSpec, entries: usize) -> Result<Vec<crate::SpectrumEntry>, SpectraError> {
    let cap = if domain.domain == Domain::Disk { 0.99 * DISK_LIMIT } else { 1e6 };
    let mut limit = 4.0;
    loop {
        let spec = enumerate_spectrum(domain, limit)?;
        if spec.len() > entries {
            return Ok(spec.into_iter().take(entries).collect());
        }
        if limit >= cap {
            return Err(SpectraError::TooFewEigenvalues { found: spec.len(), wanted: entries });
        }
        limit = (2.0 * limit).min(cap);
    }
}

/// Count every basis eigenfunction of the first `entries` distinct
/// eigenvalues and compare with `kappa`.
pub fn courant_audit(domain: &DomainSpec, entries: usize, resolution: usize) -> Result<Vec<AuditRow>, ScenarioError> {
    match domain.domain {
        Domain::Hypercube { n } if n <= 3 => {}
        Domain::Hypercube { n } => {
            return Err(SpectraError::Unsupported(format!("audit of the {n}-dimensional hypercube")).into())
        }
        Domain::Parallelepiped { .. } => return Err(SpectraError::Unsupported("audit of the parallelepiped".into()).into()),
        _ => {}
    }
    let spectrum = spectrum_prefix(domain, entries)?;
    let chart = Chart::for_domain(domain);
    let refinement = Refinement::doubling(chart.default_cells(resolution), AUDIT_REFINEMENTS);
    let jobs: Vec<_> = spectrum
        .iter()
        .flat_map(|e| e.modes.iter().map(move |m| (e, m)))
        .collect();
    jobs.into_par_iter()
        .map(|(entry, mode)| {
            let comb = Arc::new(Combination::new(vec![(1.0, mode.clone())])?);
            let field = chart_field(comb);
            let report = count_nodal_domains(&field, &chart, &CrackSet::none(), &refinement)?;
            Ok(AuditRow {
                mode: mode.index.to_string(),
                eigenvalue: entry.eigenvalue,
                kappa: entry.kappa,
                multiplicity: entry.multiplicity,
                beta0: report.count,
                stable: report.stable,
                ok: report.count <= entry.kappa,
            })
        })
        .collect()
}
