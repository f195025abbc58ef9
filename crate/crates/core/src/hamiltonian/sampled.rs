//! Families given as matrices sampled on a grid, interpolated linearly.
//!
//! File format (UTF-8 text):
//!
//! ```text
//! N M
//! s_0
//! re,im re,im ...   (N entries, row 0)
//! ...               (N rows)
//! s_1
//! ...
//! ```

use std::fmt::Write as _;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::{Path, PathBuf};

use nalgebra::DMatrix;

use super::{uniform_grid, HamiltonianFamily};
use crate::error::{Error, Result};
use crate::linalg::{HermitianMatrix, C64};

#[derive(Debug, Clone)]
pub struct SampledFamily {
    dim: usize,
    grid: Vec<f64>,
    samples: Vec<DMatrix<C64>>,
    label: String,
}

impl SampledFamily {
    /// The grid must be strictly increasing from 0 to 1.
    pub fn new(
        grid: Vec<f64>,
        samples: Vec<DMatrix<C64>>,
        label: impl Into<String>,
    ) -> Result<Self> {
        if grid.len() < 2 || grid.len() != samples.len() {
            return Err(Error::InvalidGrid(format!(
                "need at least 2 samples with one matrix each (got {} points, {} matrices)",
                grid.len(),
                samples.len()
            )));
        }
        if grid[0] != 0.0 || *grid.last().unwrap() != 1.0 {
            return Err(Error::InvalidGrid(
                "grid must start at 0 and end at 1".into(),
            ));
        }
        if grid.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidGrid(
                "grid must be strictly increasing".into(),
            ));
        }
        let dim = samples[0].nrows();
        for m in &samples {
            if m.nrows() != dim || m.ncols() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: m.nrows().max(m.ncols()),
                });
            }
        }
        Ok(Self {
            dim,
            grid,
            samples,
            label: label.into(),
        })
    }

    /// Tabulates `family` on `samples` uniform points.
    pub fn from_family(family: &dyn HamiltonianFamily, samples: usize) -> Result<Self> {
        let grid = uniform_grid(samples);
        let mats = grid
            .iter()
            .map(|&s| family.evaluate(s).into_inner())
            .collect();
        Self::new(grid, mats, format!("sampled({})", family.label()))
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn samples(&self) -> &[DMatrix<C64>] {
        &self.samples
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = std::fs::File::open(path)?;
        let mut fam = Self::parse(file, path)?;
        fam.label = format!("sampled_family({})", path.display());
        Ok(fam)
    }

    /// Parses the text format; `origin` is only used in error messages.
    pub fn parse(reader: impl Read, origin: impl AsRef<Path>) -> Result<Self> {
        let origin: PathBuf = origin.as_ref().to_path_buf();
        let mut lines = BufReader::new(reader)
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l))
            .filter(|(_, l)| l.as_ref().map(|s| !s.trim().is_empty()).unwrap_or(true));
        let err = |line: usize, msg: String| Error::Parse {
            path: origin.clone(),
            line,
            msg,
        };
        let mut next = |what: &str| -> Result<(usize, String)> {
            match lines.next() {
                Some((n, Ok(l))) => Ok((n, l)),
                Some((_, Err(e))) => Err(e.into()),
                None => Err(err(0, format!("unexpected end of file, expected {what}"))),
            }
        };

        let (ln, header) = next("header `N M`")?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(err(ln, "header must be `N M`".into()));
        }
        let n: usize = fields[0]
            .parse()
            .map_err(|_| err(ln, format!("bad dimension `{}`", fields[0])))?;
        let m: usize = fields[1]
            .parse()
            .map_err(|_| err(ln, format!("bad sample count `{}`", fields[1])))?;
        if n < 1 || m < 2 {
            return Err(err(ln, "need N >= 1 and M >= 2".into()));
        }

        let mut grid = Vec::with_capacity(m);
        let mut samples = Vec::with_capacity(m);
        for _ in 0..m {
            let (ln, sline) = next("sample coordinate s")?;
            let s: f64 = sline
                .trim()
                .parse()
                .map_err(|_| err(ln, format!("bad s value `{}`", sline.trim())))?;
            let mut mat = DMatrix::zeros(n, n);
            for i in 0..n {
                let (ln, row) = next("matrix row")?;
                let entries: Vec<&str> = row.split_whitespace().collect();
                if entries.len() != n {
                    return Err(err(
                        ln,
                        format!("expected {n} entries, found {}", entries.len()),
                    ));
                }
                for (j, e) in entries.iter().enumerate() {
                    let (re, im) = e
                        .split_once(',')
                        .ok_or_else(|| err(ln, format!("entry `{e}` is not `re,im`")))?;
                    let re: f64 = re
                        .parse()
                        .map_err(|_| err(ln, format!("bad real part `{re}`")))?;
                    let im: f64 = im
                        .parse()
                        .map_err(|_| err(ln, format!("bad imaginary part `{im}`")))?;
                    if !re.is_finite() || !im.is_finite() {
                        return Err(err(ln, "non-finite entry".into()));
                    }
                    mat[(i, j)] = C64::new(re, im);
                }
            }
            grid.push(s);
            samples.push(mat);
        }
        Self::new(grid, samples, "sampled_family").map_err(|e| err(0, e.to_string()))
    }

    pub fn write_to(&self, mut w: impl Write) -> Result<()> {
        let mut buf = String::new();
        writeln!(buf, "{} {}", self.dim, self.grid.len()).unwrap();
        for (s, m) in self.grid.iter().zip(&self.samples) {
            writeln!(buf, "{s:e}").unwrap();
            for i in 0..self.dim {
                let row: Vec<String> = (0..self.dim)
                    .map(|j| format!("{:e},{:e}", m[(i, j)].re, m[(i, j)].im))
                    .collect();
                writeln!(buf, "{}", row.join(" ")).unwrap();
            }
        }
        w.write_all(buf.as_bytes())?;
        Ok(())
    }

    fn interpolate_into(&self, s: f64, out: &mut DMatrix<C64>) {
        let s = s.clamp(0.0, 1.0);
        let k = self
            .grid
            .partition_point(|&g| g <= s)
            .clamp(1, self.grid.len() - 1);
        let (s0, s1) = (self.grid[k - 1], self.grid[k]);
        let t = (s - s0) / (s1 - s0);
        let (a, b) = (&self.samples[k - 1], &self.samples[k]);
        for ((o, x), y) in out.iter_mut().zip(a.iter()).zip(b.iter()) {
            *o = x * (1.0 - t) + y * t;
        }
    }
}

impl HamiltonianFamily for SampledFamily {
    fn dim(&self) -> usize {
        self.dim
    }

    fn label(&self) -> String {
        self.label.clone()
    }

    fn evaluate(&self, s: f64) -> HermitianMatrix {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        self.interpolate_into(s, &mut m);
        HermitianMatrix::new_unchecked(m)
    }

    fn evaluate_into(&self, s: f64, out: &mut HermitianMatrix) {
        self.interpolate_into(s, out.as_matrix_mut());
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::{validate_family, SpinHalfFamily, SpinHalfParams};
    use crate::linalg::max_abs_diff;

    const TWO_BY_TWO: &str = "2 3
0
1,0 0,0
0,0 -1,0
0.5
0,0 1,0
1,0 0,0
1
1,0 0,0
0,0 -1,0
";

    #[test]
    fn parses_and_interpolates_linearly() {
        let fam = SampledFamily::parse(TWO_BY_TWO.as_bytes(), "mem").unwrap();
        assert_eq!(fam.dim(), 2);
        let h = fam.evaluate(0.25).into_inner();
        assert!((h[(0, 0)] - C64::new(0.5, 0.0)).norm() < 1e-15);
        assert!((h[(0, 1)] - C64::new(0.5, 0.0)).norm() < 1e-15);
        assert_eq!(fam.evaluate(1.0), fam.evaluate(0.0));
    }

    #[test]
    fn round_trips_through_text() {
        let spin = SpinHalfFamily::new(SpinHalfParams::new(1.0, 3.0).unwrap());
        let fam = SampledFamily::from_family(&spin, 33).unwrap();
        let mut buf = Vec::new();
        fam.write_to(&mut buf).unwrap();
        let back = SampledFamily::parse(buf.as_slice(), "mem").unwrap();
        for (a, b) in fam.samples().iter().zip(back.samples()) {
            assert_eq!(max_abs_diff(a, b), 0.0);
        }
        assert_eq!(fam.grid(), back.grid());
        assert!(validate_family(&back, 101, None).unwrap().passes());
    }

    #[test]
    fn reports_line_of_bad_entry() {
        let bad = TWO_BY_TWO.replace("0,0 1,0", "0,0 1;0");
        match SampledFamily::parse(bad.as_bytes(), "f.txt") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 6),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_grid_not_spanning_unit_interval() {
        let bad = TWO_BY_TWO.replacen("\n1\n", "\n0.9\n", 1);
        assert!(SampledFamily::parse(bad.as_bytes(), "f").is_err());
    }

    #[test]
    fn rejects_truncated_file() {
        let cut: String = TWO_BY_TWO.lines().take(5).collect::<Vec<_>>().join("\n");
        assert!(SampledFamily::parse(cut.as_bytes(), "f").is_err());
    }
}
