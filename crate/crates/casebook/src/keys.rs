//! Keys of printed values: `beta:D`, `beta:D|region`, `vol:D|region#i`,
//! `tder:...#i`, `adjoint:D#i`, `quantity@a=1,b=2`, `expansion:name`,
//! `reduction:name` and plain scalars such as `Ln`.

use std::collections::BTreeMap;

use fano_symbolic::{parse_point, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PieceKind {
    /// Volume of `L - uF` on one chamber.
    Volume,
    /// Derivative in `t` of the volume of `L_t - uF` on one chamber.
    TDerivative,
    /// Volume of `-K - uF` on one adjoint chamber.
    Adjoint,
}

#[derive(Clone, Debug, PartialEq)]
pub enum GoldenKey {
    Beta { divisor: String, region: Option<String> },
    Piece { kind: PieceKind, divisor: String, region: Option<String>, index: usize },
    Spot { quantity: String, point: BTreeMap<String, Q> },
    Expansion(String),
    Reduction(String),
    Scalar(String),
}

fn divisor_region(s: &str) -> (String, Option<String>) {
    match s.split_once('|') {
        Some((d, r)) => (d.trim().to_string(), Some(r.trim().to_string())),
        None => (s.trim().to_string(), None),
    }
}

impl GoldenKey {
    pub fn parse(key: &str) -> Result<Self, String> {
        if let Some((quantity, point)) = key.split_once('@') {
            let point = parse_point(point).map_err(|e| format!("key `{key}`: {e}"))?;
            return Ok(GoldenKey::Spot { quantity: quantity.to_string(), point });
        }
        if let Some((kind, rest)) = key.split_once(':') {
            let piece = match kind {
                "vol" => Some(PieceKind::Volume),
                "tder" => Some(PieceKind::TDerivative),
                "adjoint" => Some(PieceKind::Adjoint),
                _ => None,
            };
            if let Some(kind) = piece {
                let (head, index) = rest
                    .rsplit_once('#')
                    .ok_or_else(|| format!("key `{key}` needs a chamber index"))?;
                let index = index.parse().map_err(|_| format!("key `{key}`: bad chamber index"))?;
                let (divisor, region) = divisor_region(head);
                return Ok(GoldenKey::Piece { kind, divisor, region, index });
            }
            return match kind {
                "beta" => {
                    let (divisor, region) = divisor_region(rest);
                    Ok(GoldenKey::Beta { divisor, region })
                }
                "expansion" => Ok(GoldenKey::Expansion(rest.to_string())),
                "reduction" => Ok(GoldenKey::Reduction(rest.to_string())),
                _ => Err(format!("key `{key}` has an unknown kind")),
            };
        }
        if key.is_empty() || !key.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return Err(format!("key `{key}` is malformed"));
        }
        Ok(GoldenKey::Scalar(key.to_string()))
    }
}

/// Key of the beta value of a divisor on a region.
pub fn beta_key(divisor: &str, region: Option<&str>) -> String {
    match region {
        Some(r) => format!("beta:{divisor}|{r}"),
        None => format!("beta:{divisor}"),
    }
}
