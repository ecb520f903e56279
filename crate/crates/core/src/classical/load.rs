use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{exact_min_distance, ClassicalCode, ClassicalError, Distance, Family, DISTANCE_MAX_DIM};
use crate::gf2::{BinaryMatrix, Gf2Error};

/// Claims carried in `# key: value` comment lines of a code file.
///
/// Recognised keys: `n`, `k_c`, `d`, `w`, and `matrix` (`generator`, the
/// default, or `check`).
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeHeader {
    pub n: Option<usize>,
    pub k_c: Option<usize>,
    pub d: Option<usize>,
    pub w: Option<usize>,
    pub matrix_is_check: bool,
}

impl CodeHeader {
    fn parse(text: &str) -> Result<Self, ClassicalError> {
        let mut h = Self::default();
        for (idx, line) in text.lines().enumerate() {
            let Some(rest) = line.trim().strip_prefix('#') else {
                continue;
            };
            let Some((key, value)) = rest.split_once(':') else {
                continue;
            };
            let (key, value) = (key.trim(), value.trim());
            let number = || {
                value.parse::<usize>().map_err(|_| {
                    ClassicalError::Gf2(Gf2Error::Parse {
                        line: idx + 1,
                        message: format!("header `{key}` expects an integer, got `{value}`"),
                    })
                })
            };
            match key {
                "n" => h.n = Some(number()?),
                "k_c" | "k" => h.k_c = Some(number()?),
                "d" => h.d = Some(number()?),
                "w" => h.w = Some(number()?),
                "matrix" => match value {
                    "generator" => h.matrix_is_check = false,
                    "check" => h.matrix_is_check = true,
                    other => {
                        return Err(ClassicalError::Gf2(Gf2Error::Parse {
                            line: idx + 1,
                            message: format!("unknown matrix kind `{other}`"),
                        }))
                    }
                },
                _ => {}
            }
        }
        Ok(h)
    }
}

/// Reads a user-supplied code from disk. See [`parse_code`].
pub fn load_code(path: impl AsRef<Path>) -> Result<(ClassicalCode, CodeHeader), ClassicalError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| ClassicalError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_code(&text)
}

/// Parses a code in the matrix text format, validating any header claims.
///
/// The distance is enumerated when feasible and must then equal the claimed
/// `d`; otherwise the claimed value is recorded with the `Design` flag.
pub fn parse_code(text: &str) -> Result<(ClassicalCode, CodeHeader), ClassicalError> {
    let header = CodeHeader::parse(text)?;
    let matrix = BinaryMatrix::parse_text(text)?;
    let generator = if header.matrix_is_check {
        matrix.null_space()
    } else {
        matrix
    };
    let mut code = ClassicalCode::from_generator(&generator, Family::UserSupplied);

    if let Some(n) = header.n {
        if n != code.n {
            return Err(mismatch("n", n, code.n));
        }
    }
    if let Some(k) = header.k_c {
        if k != code.k {
            return Err(mismatch("k_c", k, code.k));
        }
    }
    match exact_min_distance(&code.generator, &code.check, DISTANCE_MAX_DIM) {
        Some(d) => {
            if let Some(claimed) = header.d {
                if claimed != d {
                    return Err(mismatch("d", claimed, d));
                }
            }
            code.distance = Distance::exact(d);
        }
        None => {
            if let Some(claimed) = header.d {
                code.distance = Distance::design(claimed);
            }
        }
    }
    Ok((code, header))
}

fn mismatch(what: &'static str, claimed: usize, actual: usize) -> ClassicalError {
    ClassicalError::ClaimMismatch {
        what,
        claimed: claimed.to_string(),
        actual: actual.to_string(),
    }
}
