use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{FieldConfig, FiniteField};
use crate::series::PerfExp;

/// Default relative x-adic working precision for results of inexact operations.
pub const DEFAULT_WORK_PREC: i128 = 32;

/// Shared arithmetic context: the residue field, the perfection depth cap `E`
/// and the relative x-adic working precision. Cheap to clone.
#[derive(Debug, Clone)]
pub struct Ctx {
    field: Arc<FiniteField>,
    perf_depth: u32,
    max_den: i128,
    work_prec: PerfExp,
}

impl Ctx {
    pub fn new(config: FieldConfig) -> Result<Self> {
        let depth = 8 * config.v;
        Self::with_params(config, depth, PerfExp::int(DEFAULT_WORK_PREC))
    }

    pub fn with_params(config: FieldConfig, perf_depth: u32, work_prec: PerfExp) -> Result<Self> {
        let max_den = (config.p as i128)
            .checked_pow(perf_depth)
            .filter(|d| *d < (1i128 << 62))
            .ok_or_else(|| Error::InvalidConfig(format!("perfection depth {perf_depth} too large")))?;
        if work_prec <= PerfExp::zero() {
            return Err(Error::InvalidConfig("working precision must be positive".into()));
        }
        let cfg = FieldConfig::new(config.p, config.v, config.s, Some(config.modulus))?;
        let ctx = Self { field: Arc::new(FiniteField::new(cfg)), perf_depth, max_den, work_prec };
        ctx.check_exp(&ctx.work_prec)?;
        Ok(ctx)
    }

    /// Convenience constructor with the default modulus.
    pub fn for_q(p: u32, v: u32, s: u32) -> Result<Self> {
        Self::new(FieldConfig::new(p, v, s, None)?)
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn config(&self) -> &FieldConfig {
        self.field.config()
    }

    pub fn p(&self) -> u32 {
        self.field.p()
    }

    pub fn v(&self) -> u32 {
        self.config().v
    }

    pub fn q(&self) -> u64 {
        self.config().q()
    }

    pub fn perf_depth(&self) -> u32 {
        self.perf_depth
    }

    pub fn work_prec(&self) -> &PerfExp {
        &self.work_prec
    }

    /// Same field and depth, different working precision.
    pub fn with_work_prec(&self, work_prec: PerfExp) -> Result<Self> {
        if work_prec <= PerfExp::zero() {
            return Err(Error::InvalidConfig("working precision must be positive".into()));
        }
        self.check_exp(&work_prec)?;
        Ok(Self { work_prec, ..self.clone() })
    }

    pub(crate) fn check_exp(&self, e: &PerfExp) -> Result<()> {
        let den = e.den();
        if den > self.max_den {
            return Err(Error::PerfectionDepthExceeded {
                needed: e.den_exp(self.p()).unwrap_or(u32::MAX),
                cap: self.perf_depth,
            });
        }
        Ok(())
    }
}
