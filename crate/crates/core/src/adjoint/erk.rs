use crate::error::{Error, Result};

use super::problem::OdeProblem;

/// Stage vectors of one step, `stages[i] = U_{i+1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct StageSet {
    /// Index the step ends at.
    pub step: usize,
    pub t: f64,
    pub h: f64,
    pub stages: Vec<Vec<f64>>,
}

/// `acc = base + h * Σ coef[j] * k[j]`, skipping zero coefficients. Stages
/// and the result share this routine so a stiffly accurate last stage is
/// bitwise equal to the result.
fn combine(base: &[f64], h: f64, coef: &[f64], k: &[Vec<f64>]) -> Vec<f64> {
    let mut sum = vec![0.0; base.len()];
    for (c, kj) in coef.iter().zip(k) {
        if *c != 0.0 {
            for (s, x) in sum.iter_mut().zip(kj) {
                *s += c * x;
            }
        }
    }
    base.iter().zip(&sum).map(|(b, s)| b + h * s).collect()
}

/// One explicit step from `u` at index `step - 1`.
pub fn erk_step(p: &OdeProblem, step: usize, u: &[f64]) -> Result<(Vec<f64>, StageSet)> {
    let tab = &p.tableau;
    let l = tab.stages();
    let h = p.h;
    let t = p.time(step - 1);
    let mut stages: Vec<Vec<f64>> = Vec::with_capacity(l);
    let mut k: Vec<Vec<f64>> = Vec::with_capacity(l);
    for i in 0..l {
        let ui = combine(u, h, &tab.a[i][..i], &k);
        let mut ki = vec![0.0; u.len()];
        p.system.rhs(t + tab.c[i] * h, &ui, &mut ki);
        stages.push(ui);
        k.push(ki);
    }
    let next = combine(u, h, &tab.b, &k);
    if next.iter().any(|x| !x.is_finite()) {
        return Err(Error::Domain(format!("non-finite state at step {step}")));
    }
    Ok((next, StageSet { step, t, h, stages }))
}

/// Discrete adjoint of [`erk_step`]: maps `λ_{n+1}` to `λ_n`.
pub fn erk_adjoint_step(p: &OdeProblem, st: &StageSet, lam: &[f64]) -> Result<Vec<f64>> {
    let tab = &p.tableau;
    let l = tab.stages();
    let dim = lam.len();
    if st.stages.len() != l || st.stages.iter().any(|u| u.len() != dim) {
        return Err(Error::Domain("stage set does not match the problem".into()));
    }
    let mut theta: Vec<Vec<f64>> = vec![vec![0.0; dim]; l];
    let mut w = vec![0.0; dim];
    for i in (0..l).rev() {
        for (x, y) in w.iter_mut().zip(lam) {
            *x = tab.b[i] * y;
        }
        for (row, th) in tab.a.iter().zip(&theta).skip(i + 1) {
            let a = row[i];
            if a != 0.0 {
                for (x, y) in w.iter_mut().zip(th) {
                    *x += a * y;
                }
            }
        }
        let mut out = vec![0.0; dim];
        p.system.rhs_jac_t(st.t + tab.c[i] * st.h, &st.stages[i], &w, &mut out);
        for x in out.iter_mut() {
            *x *= st.h;
        }
        theta[i] = out;
    }
    let mut prev = lam.to_vec();
    for th in &theta {
        for (x, y) in prev.iter_mut().zip(th) {
            *x += y;
        }
    }
    Ok(prev)
}

/// Integrates all steps without storing anything; returns `u_N`.
pub fn integrate(p: &OdeProblem, u0: &[f64]) -> Result<Vec<f64>> {
    let mut u = u0.to_vec();
    for k in 1..=p.steps {
        u = erk_step(p, k, &u)?.0;
    }
    Ok(u)
}
