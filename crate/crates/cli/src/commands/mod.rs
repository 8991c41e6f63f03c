mod check;
mod gains;
mod reproduce;
mod simulate;

pub use check::cmd_check;
pub use gains::cmd_gains;
pub use reproduce::cmd_reproduce;
pub use simulate::cmd_simulate;

/// Process exit categories: success/satisfied, criterion unsatisfied,
/// configuration error, numerical failure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Satisfied,
    Unsatisfied,
    ConfigError,
    NumericalFailure,
}

impl Outcome {
    pub fn code(self) -> u8 {
        match self {
            Outcome::Satisfied => 0,
            Outcome::Unsatisfied => 1,
            Outcome::ConfigError => 2,
            Outcome::NumericalFailure => 3,
        }
    }
}
