//! Text format for complex numbers: `re,im` pairs, lists separated by `;`.

use bethe_core::C64;

use crate::error::{HarnessError, Result};

fn parse_f64(part: &str, whole: &str) -> Result<f64> {
    part.trim().parse::<f64>().map_err(|_| HarnessError::Parse {
        input: whole.to_string(),
        reason: "expected a decimal number",
    })
}

/// Parses `re,im` or a bare real `re`.
pub fn parse_complex(s: &str) -> Result<C64> {
    let parts: Vec<&str> = s.split(',').collect();
    let z = match parts.as_slice() {
        [re] => C64::new(parse_f64(re, s)?, 0.0),
        [re, im] => C64::new(parse_f64(re, s)?, parse_f64(im, s)?),
        _ => {
            return Err(HarnessError::Parse {
                input: s.to_string(),
                reason: "expected `re,im` or `re`",
            })
        }
    };
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(HarnessError::Parse {
            input: s.to_string(),
            reason: "values must be finite",
        });
    }
    Ok(z)
}

/// Parses a `;`-separated list of complex numbers, e.g. `0.1,0;-0.4,0.2;1.5`.
pub fn parse_complex_list(s: &str) -> Result<Vec<C64>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(';').map(parse_complex).collect()
}

/// `re,im` with 17 significant digits each.
pub fn format_complex(z: C64) -> String {
    format!("{:.16e},{:.16e}", z.re, z.im)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_pairs_and_reals() {
        assert_eq!(parse_complex("1.5,-2").unwrap(), C64::new(1.5, -2.0));
        assert_eq!(parse_complex(" 3e-1 ").unwrap(), C64::new(0.3, 0.0));
        let list = parse_complex_list("0.1,0; -0.4,0.2;1.5").unwrap();
        assert_eq!(
            list,
            vec![C64::new(0.1, 0.0), C64::new(-0.4, 0.2), C64::new(1.5, 0.0)]
        );
        assert!(parse_complex_list("").unwrap().is_empty());
    }

    #[test]
    fn rejects_malformed() {
        assert!(parse_complex("1,2,3").is_err());
        assert!(parse_complex("x").is_err());
        assert!(parse_complex("nan,0").is_err());
    }

    #[test]
    fn formatting_round_trips_exactly() {
        let z = C64::new(0.1 + 0.2, -1.0 / 3.0);
        let s = format_complex(z);
        assert_eq!(parse_complex(&s).unwrap(), z);
        assert_eq!(
            format_complex(C64::new(1.0, 0.0)),
            "1.0000000000000000e0,0.0000000000000000e0"
        );
    }
}
