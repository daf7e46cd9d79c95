use crate::comp::CompSeries;
use crate::ctx::Ctx;
use crate::error::Result;

use super::{ImplicitProblem, OdeProblem, RiccatiProblem};

/// A governing equation for [`Ctx::residual`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Equation {
    Implicit(ImplicitProblem),
    Ode(OdeProblem),
    Riccati(RiccatiProblem),
}

impl Ctx {
    /// Left side minus right side of `eq` at `candidate`, truncated at order `n`.
    pub fn residual(&self, eq: &Equation, candidate: &CompSeries, n: i64) -> Result<CompSeries> {
        match eq {
            Equation::Implicit(p) => self.residual_implicit(p, candidate, n),
            Equation::Ode(p) => self.residual_ode(p, candidate, n),
            Equation::Riccati(p) => self.residual_riccati(p, candidate, n),
        }
    }

    /// `sum_k P_k o z^(k)` modulo order `n`.
    pub fn residual_implicit(&self, prob: &ImplicitProblem, z: &CompSeries, n: i64) -> Result<CompSeries> {
        let mut acc = self.cs_zero();
        let mut power = self.cs_identity();
        for (k, pk) in prob.p.iter().enumerate() {
            if k > 0 {
                power = self.cs_truncate(&self.cs_compose(z, &power)?, n);
            }
            acc = self.cs_add(&acc, &self.cs_compose(pk, &power)?);
        }
        Ok(self.cs_truncate(&acc, n))
    }

    /// `dz - sum_{j, k} a_jk tau^j(z^(k))` modulo order `n`.
    pub fn residual_ode(&self, prob: &OdeProblem, z: &CompSeries, n: i64) -> Result<CompSeries> {
        let mut acc = self.carlitz_d(z)?;
        let kmax = prob.a.keys().map(|&(_, k)| k).max().unwrap_or(0);
        let mut powers = vec![self.cs_identity()];
        for _ in 1..=kmax {
            let next = self.cs_truncate(&self.cs_compose(z, powers.last().expect("nonempty"))?, n + 1);
            powers.push(next);
        }
        for (&(j, k), a) in &prob.a {
            let term = self.cs_scale(a, &self.cs_tau(&powers[k as usize], j)?);
            acc = self.cs_sub(&acc, &term);
        }
        Ok(self.cs_truncate(&acc, n))
    }

    /// `dy - lambda (y o y) - sum_k p_k tau^k y - R` modulo order `n`.
    pub fn residual_riccati(&self, prob: &RiccatiProblem, y: &CompSeries, n: i64) -> Result<CompSeries> {
        let mut acc = self.carlitz_d(y)?;
        let yy = self.cs_compose(y, y)?;
        acc = self.cs_sub(&acc, &self.cs_scale(&prob.lambda, &yy));
        for (&k, pk) in &prob.p {
            acc = self.cs_sub(&acc, &self.cs_scale(pk, &self.cs_tau(y, k)?));
        }
        let r = self.cs_from_terms(prob.r.iter().map(|(k, c)| (*k, c.clone())), None);
        acc = self.cs_sub(&acc, &r);
        Ok(self.cs_truncate(&acc, n))
    }
}
