//! Named quantum codes used throughout the crate, with their expected
//! parameters and the check-row weight `w` fed to the overhead model.

use serde::Serialize;

use crate::classical::{bch_code, extended_qr_code, punctured_reed_muller};
use crate::css::{css_from_classical, css_from_nested, css_from_self_orthogonal, derive_smaller_code, CssCode, CssError, CssOrigin};
use crate::gf2::BinaryMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Recipe {
    Bch { m: u32, delta: usize },
    Qr { p: usize, deletions: usize },
    RmNested,
    RmHamming,
    FourQubit,
}

#[derive(Clone, Debug, Serialize)]
pub struct NamedCode {
    pub name: &'static str,
    pub n: usize,
    pub k: usize,
    pub d: usize,
    /// Mean weight of an `H̃` row as used by the overhead model.
    pub w: Option<usize>,
    #[serde(skip)]
    recipe: Recipe,
}

const fn named(name: &'static str, n: usize, k: usize, d: usize, w: Option<usize>, recipe: Recipe) -> NamedCode {
    NamedCode { name, n, k, d, w, recipe }
}

pub const NAMED_CODES: &[NamedCode] = &[
    named("steane", 7, 1, 3, Some(4), Recipe::Bch { m: 3, delta: 3 }),
    named("four-qubit", 4, 2, 2, Some(4), Recipe::FourQubit),
    named("rm15", 15, 1, 3, Some(8), Recipe::RmNested),
    named("hamming15", 15, 7, 3, Some(8), Recipe::RmHamming),
    named("golay24", 24, 0, 8, Some(8), Recipe::Qr { p: 23, deletions: 0 }),
    named("golay23", 23, 1, 7, Some(8), Recipe::Qr { p: 23, deletions: 1 }),
    named("qr48", 48, 0, 12, Some(12), Recipe::Qr { p: 47, deletions: 0 }),
    named("qr47", 47, 1, 11, Some(12), Recipe::Qr { p: 47, deletions: 1 }),
    named("qr80", 80, 0, 16, Some(16), Recipe::Qr { p: 79, deletions: 0 }),
    named("qr79", 79, 1, 15, Some(16), Recipe::Qr { p: 79, deletions: 1 }),
    named("qr104", 104, 0, 20, Some(20), Recipe::Qr { p: 103, deletions: 0 }),
    named("qr99", 99, 5, 15, Some(20), Recipe::Qr { p: 103, deletions: 5 }),
    named("bch31-11", 31, 11, 5, Some(16), Recipe::Bch { m: 5, delta: 5 }),
    named("bch31-1", 31, 1, 7, Some(16), Recipe::Bch { m: 5, delta: 7 }),
    named("bch63-39", 63, 39, 5, Some(32), Recipe::Bch { m: 6, delta: 5 }),
    named("bch63-27", 63, 27, 7, Some(32), Recipe::Bch { m: 6, delta: 7 }),
    named("bch127-85", 127, 85, 7, Some(64), Recipe::Bch { m: 7, delta: 7 }),
    named("bch127-43", 127, 43, 13, Some(64), Recipe::Bch { m: 7, delta: 13 }),
    named("bch127-29", 127, 29, 15, Some(64), Recipe::Bch { m: 7, delta: 15 }),
    named("bch255-143", 255, 143, 15, Some(128), Recipe::Bch { m: 8, delta: 15 }),
];

/// Short names accepted in place of the registry names.
pub const ALIASES: &[(&str, &str)] = &[
    ("steane7", "steane"),
    ("hamming7", "steane"),
    ("golay", "golay23"),
    ("bch127", "bch127-29"),
    ("bch255", "bch255-143"),
];

/// Looks a code up by name, alias, or `n,k,d` triple (e.g. `127,29,15`).
pub fn lookup(key: &str) -> Option<&'static NamedCode> {
    let key = key.trim().trim_start_matches("[[").trim_end_matches("]]");
    let key = ALIASES.iter().find(|(a, _)| *a == key).map_or(key, |(_, name)| name);
    NAMED_CODES
        .iter()
        .find(|c| c.name == key || format!("{},{},{}", c.n, c.k, c.d) == key.replace(' ', ""))
}

impl NamedCode {
    pub fn label(&self) -> String {
        format!("[[{},{},{}]]", self.n, self.k, self.d)
    }

    pub fn build(&self) -> Result<CssCode, CssError> {
        match self.recipe {
            Recipe::Bch { m, delta } => css_from_classical(&bch_code(m, delta)?),
            Recipe::Qr { p, deletions } => {
                let mut code = css_from_classical(&extended_qr_code(p)?)?;
                for _ in 0..deletions {
                    code = derive_smaller_code(&code, 0)?;
                }
                Ok(code)
            }
            Recipe::RmNested => {
                // C₀ = dual of RM(2,4)* (the [15,4,8] simplex code), C₁ = RM(1,4)*.
                let c1 = punctured_reed_muller(1, 4)?;
                let rm2 = punctured_reed_muller(2, 4)?;
                let c0 = crate::classical::ClassicalCode::from_generator(
                    &rm2.check,
                    crate::classical::Family::UserSupplied,
                );
                css_from_nested(&c0, &c1)
            }
            Recipe::RmHamming => css_from_classical(&punctured_reed_muller(2, 4)?),
            Recipe::FourQubit => css_from_self_orthogonal(
                &BinaryMatrix::from_strs(&["1111"]),
                CssOrigin::Nested {
                    c0: "[4,1,4]".into(),
                    c1: "[4,3,2]".into(),
                },
            ),
        }
    }
}

pub fn build_named(key: &str) -> Option<Result<CssCode, CssError>> {
    lookup(key).map(NamedCode::build)
}
