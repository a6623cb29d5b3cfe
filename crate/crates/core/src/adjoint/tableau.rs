use crate::error::{Error, Result};

/// Explicit Runge–Kutta coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct ButcherTableau {
    pub name: &'static str,
    /// Row `i` holds `a[i][j]` for `j < i`; entries on or above the diagonal
    /// must be zero.
    pub a: Vec<Vec<f64>>,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
}

impl ButcherTableau {
    pub fn new(name: &'static str, a: Vec<Vec<f64>>, b: Vec<f64>, c: Vec<f64>) -> Result<Self> {
        let l = b.len();
        if l == 0 || a.len() != l || c.len() != l || a.iter().any(|r| r.len() != l) {
            return Err(Error::Domain("tableau dimensions disagree".into()));
        }
        for (i, row) in a.iter().enumerate() {
            if row[i..].iter().any(|&x| x != 0.0) {
                return Err(Error::Domain("tableau is not explicit".into()));
            }
        }
        Ok(Self { name, a, b, c })
    }

    pub fn stages(&self) -> usize {
        self.b.len()
    }

    /// The last stage equals the step's result.
    pub fn is_stiffly_accurate(&self) -> bool {
        self.a[self.stages() - 1] == self.b
    }

    pub fn rk4() -> Self {
        Self::new(
            "rk4",
            vec![
                vec![0.0, 0.0, 0.0, 0.0],
                vec![0.5, 0.0, 0.0, 0.0],
                vec![0.0, 0.5, 0.0, 0.0],
                vec![0.0, 0.0, 1.0, 0.0],
            ],
            vec![1.0 / 6.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0],
            vec![0.0, 0.5, 0.5, 1.0],
        )
        .expect("valid tableau")
    }

    pub fn midpoint() -> Self {
        Self::new("midpoint", vec![vec![0.0, 0.0], vec![0.5, 0.0]], vec![0.0, 1.0], vec![0.0, 0.5])
            .expect("valid tableau")
    }

    /// Heun's method padded with a third stage that equals the result.
    pub fn heun_sa() -> Self {
        Self::new(
            "heun-sa",
            vec![vec![0.0, 0.0, 0.0], vec![1.0, 0.0, 0.0], vec![0.5, 0.5, 0.0]],
            vec![0.5, 0.5, 0.0],
            vec![0.0, 1.0, 1.0],
        )
        .expect("valid tableau")
    }

    pub fn by_name(name: &str) -> Option<Self> {
        match name {
            "rk4" => Some(Self::rk4()),
            "midpoint" => Some(Self::midpoint()),
            "heun-sa" => Some(Self::heun_sa()),
            _ => None,
        }
    }
}
