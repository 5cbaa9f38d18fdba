use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("equation of state domain error: {0}")]
    EosDomain(String),

    #[error("hyperbolicity violated{}: rho = {rho:.6e}, rho_p = {rho_p:.6e}", location_suffix(.location))]
    Hyperbolicity {
        rho: f64,
        rho_p: f64,
        location: Option<[usize; 3]>,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("time step {dt:.6e} exceeds the stability bound {bound:.6e}")]
    CflViolation { dt: f64, bound: f64 },

    #[error("grid error: {0}")]
    Grid(String),

    #[error("datum error: {0}")]
    Datum(String),

    #[error("initial datum rejected by the compatibility check:\n{0}")]
    CompatRejected(String),

    #[error("config error{}: {msg}", line_suffix(.line))]
    Config { line: Option<usize>, msg: String },

    #[error("snapshot format error: {0}")]
    Snapshot(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn location_suffix(loc: &Option<[usize; 3]>) -> String {
    match loc {
        Some([i, j, k]) => format!(" at cell ({i}, {j}, {k})"),
        None => String::new(),
    }
}

fn line_suffix(line: &Option<usize>) -> String {
    match line {
        Some(n) => format!(" (line {n})"),
        None => String::new(),
    }
}

pub type Result<T> = std::result::Result<T, Error>;
