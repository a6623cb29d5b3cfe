//! Dense row-major table of `u32` cells.

/// Sentinel for infeasible cells.
pub const INF: u32 = u32::MAX;

#[derive(Debug, Clone)]
pub struct Grid {
    w: usize,
    data: Vec<u32>,
}

impl Grid {
    pub fn new(rows: usize, w: usize, fill: u32) -> Self {
        Self { w, data: vec![fill; rows * w] }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        debug_assert!(j < self.w);
        self.data[i * self.w + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        debug_assert!(j < self.w);
        self.data[i * self.w + j] = v;
    }
}
