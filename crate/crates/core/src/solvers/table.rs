use crate::ctx::Ctx;
use crate::error::Result;
use crate::series::PerfSeries;

/// Incremental table of `M(l, k)`, the coefficient of `t^(q^l)` in the
/// `k`-fold self-composition of `z = sum_{m >= lo} c_m t^(q^m)`.
///
/// Coefficients of `z` are appended one at a time; row `l` for `k >= 2`
/// only needs `c_m` with `m <= l - lo`, so rows can be filled ahead of the
/// coefficient with the same index.
pub struct SelfCompTable<'a> {
    ctx: &'a Ctx,
    lo: i64,
    kmax: u32,
    coeffs: Vec<PerfSeries>,
    // rows[l][k - 2] = M(l, k) for k in 2..=kmax
    rows: Vec<Vec<PerfSeries>>,
}

impl<'a> SelfCompTable<'a> {
    /// `lo >= 1` is the first index that may be nonzero.
    pub fn new(ctx: &'a Ctx, lo: i64, kmax: u32) -> Self {
        assert!(lo >= 1, "self-composition table needs lo >= 1");
        Self { ctx, lo, kmax, coeffs: Vec::new(), rows: Vec::new() }
    }

    /// Number of known coefficients (`c_0 .. c_{len-1}`).
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Appends the next coefficient `c_{len}`.
    pub fn push(&mut self, c: PerfSeries) {
        self.coeffs.push(c);
    }

    pub fn coeff(&self, m: i64) -> PerfSeries {
        if m < self.lo {
            return self.ctx.ps_zero();
        }
        self.coeffs.get(m as usize).cloned().expect("coefficient not yet known")
    }

    /// `M(l, k)`. Panics if a needed coefficient is not yet known.
    pub fn get(&mut self, l: i64, k: u32) -> Result<PerfSeries> {
        match k {
            0 => Ok(if l == 0 { self.ctx.ps_one() } else { self.ctx.ps_zero() }),
            1 => Ok(if l < 0 { self.ctx.ps_zero() } else { self.coeff(l) }),
            _ if l < k as i64 * self.lo => Ok(self.ctx.ps_zero()),
            _ => {
                assert!(k <= self.kmax, "k beyond table width");
                while self.rows.len() <= l as usize {
                    self.fill_row(self.rows.len() as i64)?;
                }
                Ok(self.rows[l as usize][k as usize - 2].clone())
            }
        }
    }

    fn fill_row(&mut self, l: i64) -> Result<()> {
        let ctx = self.ctx;
        let mut row = Vec::with_capacity(self.kmax.saturating_sub(1) as usize);
        for k in 2..=self.kmax {
            let mut acc = ctx.ps_zero();
            if l >= k as i64 * self.lo {
                // M(l, k) = sum_m c_m * M(l - m, k - 1)^(q^m)
                for m in self.lo..=(l - (k as i64 - 1) * self.lo) {
                    let cm = self.coeff(m);
                    if cm.is_exact_zero() {
                        continue;
                    }
                    let prev = if k == 2 { self.coeff(l - m) } else { self.rows[(l - m) as usize][k as usize - 3].clone() };
                    if prev.is_exact_zero() {
                        continue;
                    }
                    acc = ctx.ps_add(&acc, &ctx.ps_mul(&cm, &ctx.ps_frobenius(&prev, m)?));
                }
            }
            row.push(acc);
        }
        self.rows.push(row);
        Ok(())
    }
}
