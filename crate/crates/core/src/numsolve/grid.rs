use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GridError {
    #[error("grid needs upper > lower, got [{lower}, {upper}]")]
    EmptyInterval { lower: f64, upper: f64 },
    #[error("grid needs at least 3 nodes, got {0}")]
    TooFewNodes(usize),
}

/// Where the unknowns sit relative to the interval ends.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Centering {
    /// Nodes `lower + i·h`, `i = 1..=n`, `h = (upper - lower)/(n + 1)`;
    /// the endpoints carry implicit Dirichlet zeros.
    Vertex,
    /// Nodes at cell midpoints `lower + (i - 1/2)·h`, `h = (upper - lower)/n`.
    Cell,
}

/// Uniform 1D grid of interior unknowns.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    lower: f64,
    upper: f64,
    n_points: usize,
    centering: Centering,
}

impl Grid1D {
    pub fn new(lower: f64, upper: f64, n_points: usize) -> Result<Self, GridError> {
        Self::with_centering(lower, upper, n_points, Centering::Vertex)
    }

    pub fn cell_centered(lower: f64, upper: f64, n_points: usize) -> Result<Self, GridError> {
        Self::with_centering(lower, upper, n_points, Centering::Cell)
    }

    pub fn with_centering(
        lower: f64,
        upper: f64,
        n_points: usize,
        centering: Centering,
    ) -> Result<Self, GridError> {
        if !(lower.is_finite() && upper.is_finite() && upper > lower) {
            return Err(GridError::EmptyInterval { lower, upper });
        }
        if n_points < 3 {
            return Err(GridError::TooFewNodes(n_points));
        }
        Ok(Self {
            lower,
            upper,
            n_points,
            centering,
        })
    }

    pub fn lower(&self) -> f64 {
        self.lower
    }

    pub fn upper(&self) -> f64 {
        self.upper
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn centering(&self) -> Centering {
        self.centering
    }

    pub fn spacing(&self) -> f64 {
        let cells = match self.centering {
            Centering::Vertex => self.n_points + 1,
            Centering::Cell => self.n_points,
        };
        (self.upper - self.lower) / cells as f64
    }

    /// Position of the `i`-th unknown, `i` in `0..n_points`.
    pub fn node(&self, i: usize) -> f64 {
        let h = self.spacing();
        match self.centering {
            Centering::Vertex => self.lower + (i + 1) as f64 * h,
            Centering::Cell => self.lower + (i as f64 + 0.5) * h,
        }
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n_points).map(|i| self.node(i)).collect()
    }

    /// Same interval at half the spacing.
    pub fn refined(&self) -> Self {
        let n_points = match self.centering {
            Centering::Vertex => 2 * self.n_points + 1,
            Centering::Cell => 2 * self.n_points,
        };
        Self { n_points, ..*self }
    }
}
