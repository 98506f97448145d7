//! Symmetric positive-definite band matrices and their Cholesky factorization.

/// Upper band of a symmetric matrix: `data[i·(bw+1) + d] = A[i][i+d]`.
#[derive(Debug, Clone)]
pub(crate) struct BandedSpd {
    n: usize,
    bw: usize,
    data: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct NotPositiveDefinite {
    pub row: usize,
}

impl BandedSpd {
    pub fn zeros(n: usize, bw: usize) -> Self {
        let bw = bw.min(n.saturating_sub(1));
        BandedSpd { n, bw, data: vec![0.0; n * (bw + 1)] }
    }

    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        debug_assert!(j >= i && j - i <= self.bw);
        i * (self.bw + 1) + (j - i)
    }

    /// `A[i][j] += v` (and its mirror); requires `|i − j| ≤ bw`.
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        let k = self.idx(i, j);
        self.data[k] += v;
    }

    pub fn diag(&self, i: usize) -> f64 {
        self.data[self.idx(i, i)]
    }

    pub fn add_diag(&mut self, i: usize, v: f64) {
        let k = self.idx(i, i);
        self.data[k] += v;
    }

    /// `A = UᵀU`, in place.
    pub fn cholesky(mut self) -> Result<BandCholesky, NotPositiveDefinite> {
        let (n, bw) = (self.n, self.bw);
        let w = bw + 1;
        for i in 0..n {
            let lo = i.saturating_sub(bw);
            let mut s = self.data[i * w];
            for k in lo..i {
                let u = self.data[k * w + (i - k)];
                s -= u * u;
            }
            if !(s > 0.0) {
                return Err(NotPositiveDefinite { row: i });
            }
            let d = s.sqrt();
            self.data[i * w] = d;
            for j in i + 1..=(i + bw).min(n - 1) {
                let mut s = self.data[i * w + (j - i)];
                for k in j.saturating_sub(bw)..i {
                    s -= self.data[k * w + (i - k)] * self.data[k * w + (j - k)];
                }
                self.data[i * w + (j - i)] = s / d;
            }
        }
        Ok(BandCholesky(self))
    }
}

pub(crate) struct BandCholesky(BandedSpd);

impl BandCholesky {
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let BandedSpd { n, bw, data } = &self.0;
        let (n, bw, w) = (*n, *bw, bw + 1);
        let mut y = b.to_vec();
        for i in 0..n {
            let mut s = y[i];
            for k in i.saturating_sub(bw)..i {
                s -= data[k * w + (i - k)] * y[k];
            }
            y[i] = s / data[i * w];
        }
        for i in (0..n).rev() {
            let mut s = y[i];
            for j in i + 1..=(i + bw).min(n - 1) {
                s -= data[i * w + (j - i)] * y[j];
            }
            y[i] = s / data[i * w];
        }
        y
    }
}
