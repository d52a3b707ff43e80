//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    // rotation systems
    #[error("alpha is not a fixed-point-free involution (dart {0})")]
    NonInvolution(usize),
    #[error("dart orbit structure is not connected")]
    Disconnected,
    #[error("2 - V + E - F = {0} is odd; not an orientable cell embedding")]
    OddEulerDefect(i64),
    #[error("unknown generator kind `{0}`")]
    UnknownKind(String),

    // face removal
    #[error("face blocks overlap (face {0} in two blocks)")]
    OverlappingBlocks(usize),
    #[error("face block {0} is not a closed disc (connected: {connected}, euler: {euler})", connected = .1, euler = .2)]
    NotADisc(usize, bool, i64),

    // chains and homology
    #[error("intersection form needs one primal and one dual chain")]
    SameSide,
    #[error("chain is not a (relative) cycle on this surface")]
    NotACycle,
    #[error("polygon pair must have equal homology classes")]
    ClassMismatch,
    #[error("chain is not null-homologous")]
    NotNullHomologous,

    // 6-vertex / dimers
    #[error("forbidden local configuration at medial vertex {0}")]
    InvalidLocalConfig(usize),
    #[error("no Kasteleyn sign assignment exists (face system inconsistent)")]
    SignSystemInfeasible,
    #[error("empirical sign table is singular; sectors cannot be recovered")]
    SingularSignTable,
    #[error("configuration is not a perfect matching")]
    NotAMatching,

    // heights
    #[error("region is not simply connected; height has nonzero periods")]
    NotSimplyConnected,

    // guards and plumbing
    #[error("size guard: {what} = {got} exceeds limit {limit}")]
    SizeGuard {
        what: &'static str,
        got: usize,
        limit: usize,
    },
    #[error("bad specification: {0}")]
    BadSpec(String),
    #[error("no coordinates available for rendering")]
    NoCoordinates,
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code for the CLI: 3 for size guards, 2 for usage errors,
    /// 1 otherwise (check failures are reported separately).
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::SizeGuard { .. } => 3,
            Error::BadSpec(_) | Error::UnknownKind(_) => 2,
            _ => 1,
        }
    }
}
