use std::fmt::Display;

use cssft::classical::ClassicalError;
use cssft::css::CssError;
use cssft::gadgets::GadgetError;
use cssft::gf2::Gf2Error;
use cssft::overhead::OverheadError;
use cssft::sim::SimError;

pub const CHECK_FAILED: u8 = 1;
pub const USAGE: u8 = 2;
pub const UNKNOWN_CODE: u8 = 3;
pub const CONSTRUCTION: u8 = 4;
pub const CODE_FILE: u8 = 5;
pub const SIMULATION: u8 = 6;
pub const OVERHEAD: u8 = 7;
pub const OUTPUT: u8 = 8;

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn new(code: u8, message: impl Display) -> Self {
        Failure { code, message: message.to_string() }
    }

    pub fn usage(message: impl Display) -> Self {
        Self::new(USAGE, message)
    }

    pub fn unknown_code(key: &str) -> Self {
        Self::new(UNKNOWN_CODE, format!("unknown code `{key}` (not in the registry and not a readable file)"))
    }

    pub fn output(target: impl std::fmt::Debug, e: std::io::Error) -> Self {
        Self::new(OUTPUT, format!("writing {target:?}: {e}"))
    }
}

fn classical_code(e: &ClassicalError) -> u8 {
    match e {
        ClassicalError::Io { .. } | ClassicalError::Gf2(Gf2Error::Parse { .. }) | ClassicalError::ClaimMismatch { .. } => CODE_FILE,
        _ => CONSTRUCTION,
    }
}

impl From<ClassicalError> for Failure {
    fn from(e: ClassicalError) -> Self {
        Self::new(classical_code(&e), e)
    }
}

impl From<CssError> for Failure {
    fn from(e: CssError) -> Self {
        let code = match &e {
            CssError::Classical(c) => classical_code(c),
            CssError::Io { .. } => OUTPUT,
            _ => CONSTRUCTION,
        };
        Self::new(code, e)
    }
}

impl From<SimError> for Failure {
    fn from(e: SimError) -> Self {
        Self::new(SIMULATION, e)
    }
}

impl From<GadgetError> for Failure {
    fn from(e: GadgetError) -> Self {
        Self::new(SIMULATION, e)
    }
}

impl From<OverheadError> for Failure {
    fn from(e: OverheadError) -> Self {
        Self::new(OVERHEAD, e)
    }
}
