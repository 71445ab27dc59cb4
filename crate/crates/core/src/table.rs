//! Breakpoint tables: 1-D curves and 2-D rectangular grids.
//!
//! Both interpolate linearly (bilinearly for grids) and clamp queries to the
//! breakpoint hull, so a query outside the table returns the nearest edge
//! value rather than extrapolating.

use alloc::vec::Vec;

use crate::error::TableError;

fn check_axis(axis: &[f64]) -> Result<(), TableError> {
    if axis.is_empty() {
        return Err(TableError::Empty);
    }
    for (i, x) in axis.iter().enumerate() {
        if !x.is_finite() {
            return Err(TableError::NonFinite { row: i, col: 0 });
        }
    }
    for i in 1..axis.len() {
        if axis[i] <= axis[i - 1] {
            return Err(TableError::NotIncreasing { index: i });
        }
    }
    Ok(())
}

/// Locates `x` on `axis` and returns `(lower index, weight of the upper node)`.
/// Queries outside the axis clamp to the end nodes.
fn locate(axis: &[f64], x: f64) -> (usize, f64) {
    let n = axis.len();
    if n == 1 || x <= axis[0] {
        return (0, 0.0);
    }
    if x >= axis[n - 1] {
        return (n - 2, 1.0);
    }
    // partition_point gives the first breakpoint strictly greater than x
    let hi = axis.partition_point(|&b| b <= x);
    let lo = hi - 1;
    let w = (x - axis[lo]) / (axis[hi] - axis[lo]);
    (lo, w)
}

/// Piecewise-linear curve `y(x)` on strictly increasing breakpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    xs: Vec<f64>,
    ys: Vec<f64>,
}

impl Curve {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self, TableError> {
        check_axis(&xs)?;
        if ys.len() != xs.len() {
            return Err(TableError::Ragged {
                row: 0,
                found: ys.len(),
                expected: xs.len(),
            });
        }
        if let Some(i) = ys.iter().position(|y| !y.is_finite()) {
            return Err(TableError::NonFinite { row: i, col: 1 });
        }
        Ok(Self { xs, ys })
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn ys(&self) -> &[f64] {
        &self.ys
    }

    pub fn eval(&self, x: f64) -> f64 {
        let (i, w) = locate(&self.xs, x);
        if w == 0.0 {
            return self.ys[i];
        }
        self.ys[i] + w * (self.ys[i + 1] - self.ys[i])
    }

    pub fn min_value(&self) -> f64 {
        self.ys.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Returns a copy with every value multiplied by `k`.
    pub fn scaled(&self, k: f64) -> Self {
        Self {
            xs: self.xs.clone(),
            ys: self.ys.iter().map(|y| y * k).collect(),
        }
    }
}

/// Rectangular grid `z(row, col)` stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    rows: Vec<f64>,
    cols: Vec<f64>,
    values: Vec<f64>,
}

impl Grid {
    /// `values` holds one `Vec` per row breakpoint, each with one entry per
    /// column breakpoint.
    pub fn new(rows: Vec<f64>, cols: Vec<f64>, values: Vec<Vec<f64>>) -> Result<Self, TableError> {
        check_axis(&rows)?;
        check_axis(&cols)?;
        if values.len() != rows.len() {
            return Err(TableError::Ragged {
                row: values.len(),
                found: values.len(),
                expected: rows.len(),
            });
        }
        let mut flat = Vec::with_capacity(rows.len() * cols.len());
        for (r, row) in values.iter().enumerate() {
            if row.len() != cols.len() {
                return Err(TableError::Ragged {
                    row: r,
                    found: row.len(),
                    expected: cols.len(),
                });
            }
            for (c, v) in row.iter().enumerate() {
                if !v.is_finite() {
                    return Err(TableError::NonFinite { row: r, col: c });
                }
                flat.push(*v);
            }
        }
        Ok(Self {
            rows,
            cols,
            values: flat,
        })
    }

    /// Builds a grid by sampling `f(row, col)` at every node.
    pub fn from_fn(
        rows: Vec<f64>,
        cols: Vec<f64>,
        mut f: impl FnMut(f64, f64) -> f64,
    ) -> Result<Self, TableError> {
        let values = rows
            .iter()
            .map(|&r| cols.iter().map(|&c| f(r, c)).collect())
            .collect();
        Self::new(rows, cols, values)
    }

    pub fn rows(&self) -> &[f64] {
        &self.rows
    }

    pub fn cols(&self) -> &[f64] {
        &self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> f64 {
        self.values[r * self.cols.len() + c]
    }

    pub fn eval(&self, row: f64, col: f64) -> f64 {
        let (i, wr) = locate(&self.rows, row);
        let (j, wc) = locate(&self.cols, col);
        let i1 = if wr > 0.0 { i + 1 } else { i };
        let j1 = if wc > 0.0 { j + 1 } else { j };
        let z00 = self.at(i, j);
        let z01 = self.at(i, j1);
        let z10 = self.at(i1, j);
        let z11 = self.at(i1, j1);
        let lo = z00 + wc * (z01 - z00);
        let hi = z10 + wc * (z11 - z10);
        lo + wr * (hi - lo)
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_value(&self) -> f64 {
        self.values
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn values(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks(self.cols.len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn curve_interpolates_and_clamps() {
        let c = Curve::new(vec![0.0, 1.0, 3.0], vec![10.0, 20.0, 0.0]).unwrap();
        assert_eq!(c.eval(0.5), 15.0);
        assert_eq!(c.eval(2.0), 10.0);
        assert_eq!(c.eval(-4.0), 10.0);
        assert_eq!(c.eval(9.0), 0.0);
        assert_eq!(c.eval(1.0), 20.0);
    }

    #[test]
    fn curve_rejects_bad_axes() {
        assert_eq!(Curve::new(vec![], vec![]), Err(TableError::Empty));
        assert_eq!(
            Curve::new(vec![0.0, 0.0], vec![1.0, 2.0]),
            Err(TableError::NotIncreasing { index: 1 })
        );
        assert!(matches!(
            Curve::new(vec![0.0, 1.0], vec![1.0, f64::NAN]),
            Err(TableError::NonFinite { .. })
        ));
    }

    #[test]
    fn grid_corner_and_midpoint() {
        let g = Grid::new(
            vec![0.0, 2.0],
            vec![0.0, 10.0],
            vec![vec![1.0, 3.0], vec![5.0, 7.0]],
        )
        .unwrap();
        assert_eq!(g.eval(0.0, 0.0), 1.0);
        assert_eq!(g.eval(2.0, 10.0), 7.0);
        assert_eq!(g.eval(1.0, 5.0), 4.0);
        // clamped to the hull
        assert_eq!(g.eval(-1.0, 50.0), 3.0);
    }

    #[test]
    fn grid_ragged_row_reports_index() {
        let err = Grid::new(
            vec![0.0, 1.0, 2.0],
            vec![0.0, 1.0],
            vec![vec![1.0, 1.0], vec![1.0], vec![1.0, 1.0]],
        )
        .unwrap_err();
        assert_eq!(
            err,
            TableError::Ragged {
                row: 1,
                found: 1,
                expected: 2
            }
        );
    }

    #[test]
    fn single_breakpoint_axis_is_constant() {
        let g = Grid::new(vec![1.0], vec![0.0, 1.0], vec![vec![2.0, 4.0]]).unwrap();
        assert_eq!(g.eval(100.0, 0.5), 3.0);
    }
}
