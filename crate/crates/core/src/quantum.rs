//! Quantum code parameters from Hermitian self-orthogonal codes, and the
//! full CGW to quantum code pipeline.

use std::fmt;

use crate::codes::{
    cgw_to_code, field_for_k, hermitian_dual, is_hso, min_distance, Distance, LinearCode,
};
use crate::error::{CgwError, Result};
use crate::matrix::GwMatrix;

/// `[[n, kq, d]]_q` with `d` the minimum weight of the Hermitian dual, a
/// lower bound on the true distance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuantumParams {
    pub n: usize,
    pub kq: usize,
    pub d: usize,
    pub q: u32,
}

impl fmt::Display for QuantumParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},{},{}]]_{}", self.n, self.kq, self.d, self.q)
    }
}

/// Parameters of the quantum code from a Hermitian self-orthogonal `C`.
pub fn derive_params(c: &LinearCode, budget: u64) -> Result<QuantumParams> {
    if !is_hso(c) {
        return Err(CgwError::Precondition(
            "code is not Hermitian self-orthogonal".into(),
        ));
    }
    let dual = hermitian_dual(c);
    let d = match min_distance(&dual, budget)?.distance {
        Distance::Exact(d) => d,
        Distance::BudgetExceeded => {
            return Err(CgwError::BudgetExceeded(format!(
                "minimum distance of the [{},{}] dual within {budget} evaluations",
                dual.n(),
                dual.dim()
            )))
        }
    };
    Ok(QuantumParams {
        n: c.n(),
        kq: c.n() - 2 * c.dim(),
        d,
        q: c.q(),
    })
}

/// Everything the pipeline computed.
#[derive(Debug, Clone)]
pub struct PipelineReport {
    pub cgw: (usize, usize, u32),
    pub code: LinearCode,
    /// Minimum distance of `C` itself, when affordable.
    pub code_distance: Option<usize>,
    pub dual_dim: usize,
    pub params: QuantumParams,
}

impl PipelineReport {
    /// One line per stage, ending with `QECC [[n,kq,d]]_q`.
    pub fn to_text(&self) -> String {
        let (n, w, k) = self.cgw;
        let qq = self.code.ctx().order();
        let d = self
            .code_distance
            .map_or_else(|| "?".to_string(), |d| d.to_string());
        let p = &self.params;
        [
            format!("CGW n={n} w={w} k={k}"),
            format!(
                "CODE [{},{},{}]_{qq} hso=true",
                self.code.n(),
                self.code.dim(),
                d
            ),
            format!("DUAL [{},{},{}]_{qq}", self.code.n(), self.dual_dim, p.d),
            format!(
                "KV n={} kq={} d={} q={} code_dim={} q2={qq}",
                p.n,
                p.kq,
                p.d,
                p.q,
                self.code.dim()
            ),
            format!("QECC {p}"),
        ]
        .join("\n")
            + "\n"
    }
}

/// CGW → `[n, k]_{q²}` code → quantum code, for `k = q + 1`.
pub fn pipeline(w: &GwMatrix, budget: u64) -> Result<PipelineReport> {
    let report = w.verify();
    let weight = report.weight.filter(|_| report.ok).ok_or_else(|| {
        CgwError::Precondition(format!(
            "input is not a CGW: {}",
            report
                .first_failure
                .map_or_else(|| "empty".to_string(), |f| f.to_string())
        ))
    })?;
    let ctx = field_for_k(w.k())?;
    if weight % ctx.p() != 0 {
        return Err(CgwError::Precondition(format!(
            "characteristic {} does not divide the weight {weight}",
            ctx.p()
        )));
    }
    let code = cgw_to_code(w, &ctx)?;
    let params = derive_params(&code, budget)?;
    let dual_dim = code.n() - code.dim();
    let code_distance = if dual_dim == code.dim() {
        Some(params.d)
    } else {
        match min_distance(&code, budget)?.distance {
            Distance::Exact(d) => Some(d),
            Distance::BudgetExceeded => None,
        }
    };
    Ok(PipelineReport {
        cgw: (w.n(), weight as usize, w.k()),
        code,
        code_distance,
        dual_dim,
        params,
    })
}
