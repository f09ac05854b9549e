use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid Jacobi parameters: alpha = {alpha}, beta = {beta} (need both > -1)")]
    InvalidParams { alpha: f64, beta: f64 },

    #[error("parameters alpha = {alpha}, beta = {beta} outside the product-formula domain (need both >= -1/2)")]
    NotDkValid { alpha: f64, beta: f64 },

    #[error("{name} = {value} outside the domain {domain}")]
    Domain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("series truncation exceeded {cap} terms (t = {t}); use the integral route for small t")]
    SeriesTruncation { cap: usize, t: f64 },

    #[error("evaluation too close to the kernel diagonal: |theta - phi| = {separation}, t = {t}")]
    DiagonalSingularity { separation: f64, t: f64 },

    #[error("imaginary power requires gamma != 0")]
    ZeroGamma,

    #[error("malformed input: {0}")]
    Parse(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
