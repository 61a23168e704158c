//! Problem instances: the two builtin systems and a plain-text file format.
//!
//! # File format
//!
//! ```text
//! # comment to end of line
//! n      = 1
//! matrix = 1,0     -1/3,0
//!          -1/3,0   1,0
//! b      = 0,0  1,0
//! ```
//!
//! Grammar (whitespace, including newlines, is insignificant between tokens):
//!
//! ```text
//! document := field*
//! field    := "n" "=" integer
//!           | "matrix" "=" entry{4^n}     row-major
//!           | "b" "=" entry{2^n}
//! entry    := real "," real [";"]          real part, imaginary part
//! real     := decimal float (e.g. -0.5, 1e-3) | integer "/" integer
//! ```
//!
//! Each field appears exactly once, in any order. `matrix` must be Hermitian
//! and `b` a unit vector; both are checked by
//! [`validate_system`](crate::linsys::validate_system).

use crate::error::{HhlError, Result};
use crate::linsys::{validate_system, HermitianSystem};
use crate::matrix::CMatrix;
use crate::scalar::{Real, C};

/// The builtin problems: `exp1` (eigenvalues 2/3, 4/3) and `exp2` (6, 7).
pub const BUILTIN_NAMES: [&str; 2] = ["exp1", "exp2"];

/// Builtin problem by name.
pub fn builtin<T: Real>(name: &str) -> Option<HermitianSystem<T>> {
    let rows: [[f64; 2]; 2] = match name {
        "exp1" => [[1.0, -1.0 / 3.0], [-1.0 / 3.0, 1.0]],
        "exp2" => [[13.0 / 2.0, -1.0 / 2.0], [-1.0 / 2.0, 13.0 / 2.0]],
        _ => return None,
    };
    let a = CMatrix::from_real_rows(&[&rows[0], &rows[1]]).ok()?;
    validate_system(a, vec![C::new(T::zero(), T::zero()), C::new(T::one(), T::zero())]).ok()
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Num(String),
    Eq,
    Comma,
    Semi,
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>> {
    let mut toks = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line_no = lineno + 1;
        let line = line.split('#').next().unwrap_or("");
        let mut chars = line.char_indices().peekable();
        while let Some(&(i, ch)) = chars.peek() {
            match ch {
                c if c.is_whitespace() => {
                    chars.next();
                }
                '=' => {
                    chars.next();
                    toks.push((Tok::Eq, line_no));
                }
                ',' => {
                    chars.next();
                    toks.push((Tok::Comma, line_no));
                }
                ';' => {
                    chars.next();
                    toks.push((Tok::Semi, line_no));
                }
                c if c.is_ascii_alphabetic() || c == '_' => {
                    let mut end = i;
                    while let Some(&(j, c)) = chars.peek() {
                        if c.is_ascii_alphanumeric() || c == '_' {
                            end = j + c.len_utf8();
                            chars.next();
                        } else {
                            break;
                        }
                    }
                    toks.push((Tok::Ident(line[i..end].to_string()), line_no));
                }
                c if c.is_ascii_digit() || matches!(c, '.' | '+' | '-') => {
                    let mut end = i;
                    let mut prev = ' ';
                    while let Some(&(j, c)) = chars.peek() {
                        let sign_ok = matches!(c, '+' | '-') && (j == i || matches!(prev, 'e' | 'E' | '/'));
                        if c.is_ascii_digit() || matches!(c, '.' | 'e' | 'E' | '/') || sign_ok {
                            end = j + 1;
                            prev = c;
                            chars.next();
                        } else {
                            break;
                        }
                    }
                    toks.push((Tok::Num(line[i..end].to_string()), line_no));
                }
                other => {
                    return Err(HhlError::Instance(format!("line {line_no}: unexpected character '{other}'")));
                }
            }
        }
    }
    Ok(toks)
}

fn parse_real(s: &str, line: usize) -> Result<f64> {
    let bad = || HhlError::Instance(format!("line {line}: invalid number '{s}'"));
    let value = match s.split_once('/') {
        Some((p, q)) => {
            let p: f64 = p.parse::<i64>().map_err(|_| bad())? as f64;
            let q: i64 = q.parse().map_err(|_| bad())?;
            if q == 0 {
                return Err(bad());
            }
            p / q as f64
        }
        None => s.parse().map_err(|_| bad())?,
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(bad())
    }
}

/// Parses and validates an instance document.
pub fn parse_instance<T: Real>(text: &str) -> Result<HermitianSystem<T>> {
    let toks = tokenize(text)?;
    let mut n: Option<u32> = None;
    let mut matrix: Option<Vec<C<T>>> = None;
    let mut rhs: Option<Vec<C<T>>> = None;
    let mut pos = 0;
    while pos < toks.len() {
        let (key, line) = match &toks[pos] {
            (Tok::Ident(k), l) => (k.clone(), *l),
            (t, l) => return Err(HhlError::Instance(format!("line {l}: expected a field name, found {t:?}"))),
        };
        if !matches!(toks.get(pos + 1), Some((Tok::Eq, _))) {
            return Err(HhlError::Instance(format!("line {line}: expected '=' after '{key}'")));
        }
        pos += 2;
        match key.as_str() {
            "n" => {
                let Some((Tok::Num(v), l)) = toks.get(pos) else {
                    return Err(HhlError::Instance(format!("line {line}: 'n' needs an integer value")));
                };
                let parsed = v
                    .parse::<u32>()
                    .ok()
                    .filter(|&q| (1..=12).contains(&q))
                    .ok_or_else(|| HhlError::Instance(format!("line {l}: 'n' must be an integer in 1..=12, got '{v}'")))?;
                if n.replace(parsed).is_some() {
                    return Err(HhlError::Instance(format!("line {line}: duplicate field 'n'")));
                }
                pos += 1;
            }
            "matrix" | "b" => {
                let mut entries = Vec::new();
                while let Some((Tok::Num(re), l)) = toks.get(pos) {
                    let (Some((Tok::Comma, _)), Some((Tok::Num(im), _))) = (toks.get(pos + 1), toks.get(pos + 2)) else {
                        return Err(HhlError::Instance(format!("line {l}: expected 're,im' pair")));
                    };
                    entries.push(C::new(T::lit(parse_real(re, *l)?), T::lit(parse_real(im, *l)?)));
                    pos += 3;
                    if matches!(toks.get(pos), Some((Tok::Semi, _))) {
                        pos += 1;
                    }
                }
                let slot = if key == "matrix" { &mut matrix } else { &mut rhs };
                if slot.replace(entries).is_some() {
                    return Err(HhlError::Instance(format!("line {line}: duplicate field '{key}'")));
                }
            }
            other => return Err(HhlError::Instance(format!("line {line}: unknown field '{other}'"))),
        }
    }
    let n = n.ok_or_else(|| HhlError::Instance("missing field 'n'".into()))?;
    let matrix = matrix.ok_or_else(|| HhlError::Instance("missing field 'matrix'".into()))?;
    let rhs = rhs.ok_or_else(|| HhlError::Instance("missing field 'b'".into()))?;
    let dim = 1usize << n;
    if matrix.len() != dim * dim {
        return Err(HhlError::Instance(format!(
            "'matrix' has {} entries, expected {} for n = {n}",
            matrix.len(),
            dim * dim
        )));
    }
    if rhs.len() != dim {
        return Err(HhlError::Instance(format!(
            "'b' has {} entries, expected {dim} for n = {n}",
            rhs.len()
        )));
    }
    validate_system(CMatrix::from_row_major(dim, dim, matrix)?, rhs)
}

/// Serializes a system in the instance format.
pub fn format_instance<T: Real>(sys: &HermitianSystem<T>) -> String {
    let fmt = |z: &C<T>| format!("{:?},{:?}", z.re.as_f64(), z.im.as_f64());
    let mut out = format!("n = {}\nmatrix =", sys.qubits());
    for i in 0..sys.dim() {
        out.push_str("\n ");
        for j in 0..sys.dim() {
            out.push(' ');
            out.push_str(&fmt(&sys.matrix()[(i, j)]));
        }
    }
    out.push_str("\nb =");
    for z in sys.rhs() {
        out.push(' ');
        out.push_str(&fmt(z));
    }
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_embed_worked_systems() {
        let e1 = builtin::<f64>("exp1").unwrap();
        assert_eq!(e1.matrix()[(0, 1)].re, -1.0 / 3.0);
        let e2 = builtin::<f64>("exp2").unwrap();
        assert_eq!(e2.matrix()[(0, 0)].re, 6.5);
        assert!(builtin::<f64>("exp3").is_none());
    }

    #[test]
    fn parses_whitespace_insensitively() {
        let text = "# first experiment\nn=1\nmatrix = 1 , 0 ; -1/3,0\n -1/3,0   1,0\nb=0,0 1,0";
        let sys = parse_instance::<f64>(text).unwrap();
        assert_eq!(sys, builtin("exp1").unwrap());
        let squashed = "n=1 b=0,0;1,0 matrix=1,0;-1/3,0;-1/3,0;1,0";
        assert_eq!(parse_instance::<f64>(squashed).unwrap(), sys);
    }

    #[test]
    fn complex_and_exponent_entries() {
        let text = "n = 1\nmatrix = 2,0 0,1 0,-1 2e0,0\nb = 0.6,0 0,-8e-1\n";
        let sys = parse_instance::<f64>(text).unwrap();
        assert_eq!(sys.matrix()[(0, 1)], C::new(0.0, 1.0));
        assert_eq!(sys.rhs()[1], C::new(0.0, -0.8));
    }

    #[test]
    fn round_trips_through_format() {
        let sys = builtin::<f64>("exp2").unwrap();
        assert_eq!(parse_instance::<f64>(&format_instance(&sys)).unwrap(), sys);
    }

    #[test]
    fn diagnostics() {
        let err = |t: &str| parse_instance::<f64>(t).unwrap_err().to_string();
        assert!(err("n = 1\nb = 1,0 0,0").contains("missing field 'matrix'"));
        assert!(err("n = 1\nmatrix = 1,0 0,0 0,0 1,0\nb = 1,0").contains("expected 2"));
        assert!(err("n = 1\nfoo = 1").contains("unknown field 'foo'"));
        assert!(err("n = 1\nmatrix = 1 0").contains("line 2"));
        assert!(err("n = 1 n = 1").contains("duplicate"));
        assert!(err("n = 1\nmatrix = 1,0 1/0,0").contains("invalid number"));
        assert!(err("n = 1 $").contains("unexpected character"));
        let not_unit = "n = 1\nmatrix = 1,0 0,0 0,0 1,0\nb = 1,0 1,0";
        assert!(matches!(parse_instance::<f64>(not_unit), Err(HhlError::NotUnitVector { .. })));
    }
}
