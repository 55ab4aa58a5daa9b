use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Sim(#[from] tumour_core::Error),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("unknown preset {name:?}; valid presets: {valid}")]
    UnknownPreset { name: String, valid: String },

    #[error("bad configuration: {0}")]
    Config(String),

    #[error("malformed VTK file {}: {reason}", path.display())]
    Vtk { path: PathBuf, reason: String },

    #[error("run aborted at step {step}: {source}; last state written to {}", dump.display())]
    Aborted {
        step: usize,
        dump: PathBuf,
        #[source]
        source: tumour_core::Error,
    },
}

impl CliError {
    pub(crate) fn io(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> CliError {
        let path = path.into();
        move |source| CliError::Io { path, source }
    }
}
