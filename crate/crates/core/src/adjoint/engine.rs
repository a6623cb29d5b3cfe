use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::executor::{consultant_run, EngineResult, ExecutionMetrics, Policy, StepEngine};
use crate::units::{CheckpointRecord, CheckpointType, SchemeInfo};

use super::erk::{erk_adjoint_step, erk_step, integrate, StageSet};
use super::problem::OdeProblem;

#[derive(Debug, Clone, Default)]
struct Stored {
    solution: Option<Vec<f64>>,
    stages: Option<StageSet>,
}

/// Step engine that really integrates and back-propagates.
pub struct AdjointEngine<'p> {
    problem: &'p OdeProblem,
    stiffly_accurate: bool,
    solution: Option<(usize, Vec<f64>)>,
    stages: Option<StageSet>,
    stored: HashMap<(usize, CheckpointType), Stored>,
    lambda: Option<Vec<f64>>,
    pub forward_calls: usize,
}

impl<'p> AdjointEngine<'p> {
    pub fn new(problem: &'p OdeProblem) -> Self {
        Self {
            problem,
            stiffly_accurate: problem.tableau.is_stiffly_accurate(),
            solution: Some((0, problem.u0.clone())),
            stages: None,
            stored: HashMap::new(),
            lambda: None,
            forward_calls: 0,
        }
    }

    /// `dψ/du0` once every step has been reversed.
    pub fn gradient(&self) -> Option<&[f64]> {
        self.lambda.as_deref()
    }
}

impl StepEngine for AdjointEngine<'_> {
    fn forward_step(&mut self, step: usize) -> EngineResult {
        let u = match &self.solution {
            Some((i, u)) if *i + 1 == step => u,
            _ => return Err(format!("no solution at {} to compute step {step}", step - 1)),
        };
        let (next, st) = erk_step(self.problem, step, u).map_err(|e| e.to_string())?;
        self.forward_calls += 1;
        if step == self.problem.steps && self.lambda.is_none() {
            self.lambda = Some(self.problem.objective.gradient(&next));
        }
        self.solution = Some((step, next));
        self.stages = Some(st);
        Ok(())
    }

    fn reverse_step(&mut self, step: usize) -> EngineResult {
        let st = match self.stages.take() {
            Some(st) if st.step == step => st,
            _ => return Err(format!("stages of step {step} are not live")),
        };
        let lam = self.lambda.as_ref().ok_or("reversal before the final state")?;
        self.lambda = Some(erk_adjoint_step(self.problem, &st, lam).map_err(|e| e.to_string())?);
        self.solution = None;
        Ok(())
    }

    fn store(&mut self, r: &CheckpointRecord) -> EngineResult {
        let i = r.step_index;
        let solution = match r.kind {
            CheckpointType::StageValues => None,
            _ => match &self.solution {
                Some((j, u)) if *j == i => Some(u.clone()),
                _ => return Err(format!("no solution at {i} to store")),
            },
        };
        let stages = match r.kind {
            CheckpointType::Solution => None,
            _ => match &self.stages {
                Some(st) if st.step == i => Some(st.clone()),
                _ => return Err(format!("no stages of step {i} to store")),
            },
        };
        self.stored.insert((i, r.kind), Stored { solution, stages });
        Ok(())
    }

    fn restore(&mut self, r: &CheckpointRecord) -> EngineResult {
        let i = r.step_index;
        let s =
            self.stored.get(&(i, r.kind)).ok_or_else(|| format!("nothing stored for {} at {i}", r.kind))?;
        self.stages = s.stages.clone();
        self.solution = match (&s.solution, &s.stages) {
            (Some(u), _) => Some((i, u.clone())),
            // the last stage of a stiffly accurate step is the solution
            (None, Some(st)) if self.stiffly_accurate => {
                Some((i, st.stages.last().expect("at least one stage").clone()))
            }
            _ => None,
        };
        Ok(())
    }

    fn discard(&mut self, r: &CheckpointRecord) -> EngineResult {
        self.stored.remove(&(r.step_index, r.kind));
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GradientReport {
    pub policy: Policy,
    pub units: usize,
    pub gradient: Vec<f64>,
    pub objective: f64,
    pub metrics: ExecutionMetrics,
    pub predicted_recomputations: u64,
}

pub fn scheme_of(problem: &OdeProblem) -> SchemeInfo {
    SchemeInfo {
        num_stages: problem.tableau.stages(),
        stiffly_accurate: problem.tableau.is_stiffly_accurate(),
    }
}

/// Gradient of the objective with respect to `u0` under `policy` with `units`
/// of checkpoint memory.
pub fn gradient_via_policy(problem: &OdeProblem, policy: Policy, units: usize) -> Result<GradientReport> {
    let scheme = scheme_of(problem);
    let m = problem.steps;
    let predicted = policy.predicted_cost(m, units, &scheme)?;
    let (metrics, engine) = consultant_run(m, units, &scheme, policy, AdjointEngine::new(problem))?;
    let gradient = engine.gradient().ok_or_else(|| Error::Domain("no gradient produced".into()))?.to_vec();
    let objective = problem.objective.value(&integrate(problem, &problem.u0)?);
    Ok(GradientReport { policy, units, gradient, objective, metrics, predicted_recomputations: predicted })
}

/// Central differences of the objective, one coordinate at a time.
pub fn finite_difference_gradient(problem: &OdeProblem, eps: f64) -> Result<Vec<f64>> {
    let mut g = Vec::with_capacity(problem.dim());
    let mut u = problem.u0.clone();
    for i in 0..problem.dim() {
        let x = u[i];
        u[i] = x + eps;
        let fp = problem.objective.value(&integrate(problem, &u)?);
        u[i] = x - eps;
        let fm = problem.objective.value(&integrate(problem, &u)?);
        u[i] = x;
        g.push((fp - fm) / (2.0 * eps));
    }
    Ok(g)
}

/// `max |a - b| / max |b|`.
pub fn relative_error(a: &[f64], b: &[f64]) -> f64 {
    let scale = b.iter().fold(0.0f64, |m, x| m.max(x.abs())).max(f64::MIN_POSITIVE);
    a.iter().zip(b).fold(0.0f64, |m, (x, y)| m.max((x - y).abs())) / scale
}
