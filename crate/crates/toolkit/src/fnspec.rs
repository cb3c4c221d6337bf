//! JSON wire format for analytic functions.
//!
//! ```json
//! {"type": "polynomial", "coeffs": [[0, 0], [1, 0]]}
//! {"type": "mobius", "lambda": [0.5, 0]}
//! {"type": "log_extremal"}
//! {"type": "gzn", "n": 10, "base": [0.5, 0]}
//! {"type": "combo", "terms": [{"coeff": [1, 0], "function": {"type": "log_extremal"}}]}
//! ```
//!
//! Complex numbers are `[re, im]`; `coeffs[k]` multiplies `z^k`. Unknown
//! fields are rejected.

use bergman_core::funcspace::AnalyticFn;
use bergman_core::Complex64;
use serde::{Deserialize, Serialize};

use crate::ToolkitError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum FunctionSpec {
    Polynomial { coeffs: Vec<[f64; 2]> },
    Mobius { lambda: [f64; 2] },
    LogExtremal {},
    Gzn { n: usize, base: [f64; 2] },
    Combo { terms: Vec<ComboTerm> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComboTerm {
    pub coeff: [f64; 2],
    pub function: FunctionSpec,
}

fn complex(c: [f64; 2]) -> Complex64 {
    Complex64::new(c[0], c[1])
}

fn field_error(field: &str, err: bergman_core::Error) -> ToolkitError {
    ToolkitError::Spec(format!("field `{field}`: {err}"))
}

impl FunctionSpec {
    pub fn parse(text: &str) -> Result<Self, ToolkitError> {
        serde_json::from_str(text).map_err(|e| ToolkitError::Spec(e.to_string()))
    }

    pub fn build(&self) -> Result<AnalyticFn, ToolkitError> {
        match self {
            FunctionSpec::Polynomial { coeffs } => {
                AnalyticFn::polynomial(coeffs.iter().copied().map(complex).collect())
                    .map_err(|e| field_error("coeffs", e))
            }
            FunctionSpec::Mobius { lambda } => {
                AnalyticFn::mobius(complex(*lambda)).map_err(|e| field_error("lambda", e))
            }
            FunctionSpec::LogExtremal {} => Ok(AnalyticFn::LogExtremal),
            FunctionSpec::Gzn { n, base } => {
                AnalyticFn::gzn(*n, complex(*base)).map_err(|e| field_error("base", e))
            }
            FunctionSpec::Combo { terms } => {
                let built = terms
                    .iter()
                    .map(|t| {
                        if !(t.coeff[0].is_finite() && t.coeff[1].is_finite()) {
                            return Err(ToolkitError::Spec("field `coeff`: not finite".into()));
                        }
                        Ok((complex(t.coeff), t.function.build()?))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                AnalyticFn::combo(built).map_err(|e| field_error("terms", e))
            }
        }
    }
}
