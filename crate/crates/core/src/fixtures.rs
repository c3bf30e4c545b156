//! Reference matrices for `p = 7`, shipped in the matrix text format.
//!
//! The same files are compiled into the library and can be loaded from a
//! directory (laid out as `<dir>/lambda_x.mat`, ...), so a user can point the
//! CLI at edited copies.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::exactlin::IntMatrix;

macro_rules! builtin {
    ($($name:literal),* $(,)?) => {
        &[$(($name, include_str!(concat!("../fixtures/p7/", $name, ".mat")))),*]
    };
}

/// Every fixture file for `p = 7`, by stem.
pub const BUILTIN_P7: &[(&str, &str)] = builtin!(
    "lambda_x", "lambda_y",
    "theta_1_x", "theta_1_y", "theta_2_x", "theta_2_y", "theta_3_x", "theta_3_y",
    "theta_4_x", "theta_4_y", "theta_5_x", "theta_5_y", "theta_6_x", "theta_6_y",
    "lprime_x", "lprime_y", "h", "f", "pibar", "rho_x", "rho_y",
    "C_1", "C_3", "C_4", "C_5", "C_6", "D_1", "D_3", "D_4", "D_5", "D_6",
);

/// Indices of the row modules in the kernel decomposition.
pub const BLOCK_INDICES: [usize; 5] = [1, 3, 4, 5, 6];

/// The `p = 7` fixture matrices.
#[derive(Clone, Debug)]
pub struct FixtureSet {
    pub source: String,
    pub lambda_x: IntMatrix,
    pub lambda_y: IntMatrix,
    /// `theta[k-1] = (θ_k(x^{-1}), θ_k(y^{-1}))`.
    pub theta: Vec<(IntMatrix, IntMatrix)>,
    pub lprime_x: IntMatrix,
    pub lprime_y: IntMatrix,
    pub h: IntMatrix,
    pub f: IntMatrix,
    pub pibar: IntMatrix,
    pub rho_x: IntMatrix,
    pub rho_y: IntMatrix,
    pub c: BTreeMap<usize, IntMatrix>,
    pub d: BTreeMap<usize, IntMatrix>,
}

fn parse_named(source: &str, name: &str, text: &str) -> Result<IntMatrix> {
    text.parse::<IntMatrix>().map_err(|e| Error::Fixture {
        path: format!("{source}/{name}.mat"),
        source: Box::new(e),
    })
}

fn expect_shape(source: &str, name: &str, m: &IntMatrix, rows: usize, cols: usize) -> Result<()> {
    if m.rows() != rows || m.cols() != cols {
        return Err(Error::Fixture {
            path: format!("{source}/{name}.mat"),
            source: Box::new(Error::Dimension(format!(
                "expected {rows}x{cols}, found {}x{}",
                m.rows(),
                m.cols()
            ))),
        });
    }
    Ok(())
}

impl FixtureSet {
    /// Built from any name-to-text lookup; used by both loaders.
    fn assemble(source: &str, get: &dyn Fn(&str) -> Result<String>) -> Result<Self> {
        let load = |name: &str, rows: usize, cols: usize| -> Result<IntMatrix> {
            let m = parse_named(source, name, &get(name)?)?;
            expect_shape(source, name, &m, rows, cols)?;
            Ok(m)
        };
        let mut theta = Vec::with_capacity(6);
        for k in 1..=6 {
            theta.push((
                load(&format!("theta_{k}_x"), 6, 6)?,
                load(&format!("theta_{k}_y"), 6, 6)?,
            ));
        }
        let mut c = BTreeMap::new();
        let mut d = BTreeMap::new();
        for i in BLOCK_INDICES {
            c.insert(i, load(&format!("C_{i}"), 6, 6)?);
            d.insert(i, load(&format!("D_{i}"), 6, 6)?);
        }
        Ok(Self {
            source: source.to_string(),
            lambda_x: load("lambda_x", 6, 6)?,
            lambda_y: load("lambda_y", 6, 6)?,
            theta,
            lprime_x: load("lprime_x", 6, 6)?,
            lprime_y: load("lprime_y", 6, 6)?,
            h: load("h", 18, 18)?,
            f: load("f", 6, 6)?,
            pibar: load("pibar", 6, 24)?,
            rho_x: load("rho_x", 6, 6)?,
            rho_y: load("rho_y", 6, 6)?,
            c,
            d,
        })
    }

    /// The compiled-in copy.
    pub fn builtin() -> Self {
        Self::assemble("builtin:p7", &|name| {
            BUILTIN_P7
                .iter()
                .find(|(n, _)| *n == name)
                .map(|(_, t)| t.to_string())
                .ok_or_else(|| Error::Fixture {
                    path: format!("builtin:p7/{name}.mat"),
                    source: Box::new(Error::Precondition("missing builtin".into())),
                })
        })
        .expect("builtin fixtures are well formed")
    }

    /// Loads `<dir>/<name>.mat` for every fixture; errors name the file.
    pub fn load_dir(dir: &Path) -> Result<Self> {
        let source = dir.display().to_string();
        Self::assemble(&source, &|name| read_fixture_file(&dir.join(format!("{name}.mat"))))
    }

    pub fn theta(&self, k: usize) -> &(IntMatrix, IntMatrix) {
        &self.theta[k - 1]
    }
}

fn read_fixture_file(path: &PathBuf) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        source: e,
    })
}

/// Writes every builtin fixture into `dir` (created if needed).
pub fn write_builtin(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::Io {
        path: dir.display().to_string(),
        source: e,
    })?;
    for (name, text) in BUILTIN_P7 {
        let path = dir.join(format!("{name}.mat"));
        std::fs::write(&path, text).map_err(|e| Error::Io {
            path: path.display().to_string(),
            source: e,
        })?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_loads_with_expected_shapes() {
        let f = FixtureSet::builtin();
        assert_eq!(f.h.rows(), 18);
        assert_eq!(f.pibar.cols(), 24);
        assert_eq!(f.c.len(), 5);
        assert!(f.rho_x.is_identity());
    }

    #[test]
    fn builtin_text_round_trips() {
        for (name, text) in BUILTIN_P7 {
            let m: IntMatrix = text.parse().unwrap();
            assert_eq!(&m.to_string(), text, "{name}");
        }
    }

    #[test]
    fn lambda_last_row() {
        let f = FixtureSet::builtin();
        let row: Vec<i64> = f.lambda_x.row(5).iter().map(|v| i64::try_from(v).unwrap()).collect();
        assert_eq!(row, vec![-7, 0, 0, 0, 0, 1]);
    }
}
