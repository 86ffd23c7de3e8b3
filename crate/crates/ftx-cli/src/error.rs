use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Core(#[from] ftx_core::Error),

    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 1,
            CliError::Core(e) => core_exit_code(e),
        }
    }
}

pub fn core_exit_code(e: &ftx_core::Error) -> u8 {
    use ftx_core::Error as E;
    match e {
        E::Infeasible(_) => 2,
        E::Invariant(_) | E::Unroutable { .. } => 3,
        _ => 1,
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
