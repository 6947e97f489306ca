//! Polynomial text syntax for forms.
//!
//! The canonical printer emits terms in upper-triangular column order
//! `(1,1), (1,2), (2,2), (1,3), ...` as `c*xi^2` / `c*xi*xj`, omitting unit
//! coefficients and joining with ` + ` / ` - `. The parser accepts that
//! output back, plus the `w, x, y, z` aliases, implicit multiplication
//! (`2wx`), unicode squares and arbitrary whitespace.

use super::{QformError, QuadraticForm};

const ALIASES: [char; 4] = ['w', 'x', 'y', 'z'];

fn var_name(i: usize, n: usize, alias: bool) -> String {
    if alias && n <= 4 {
        // four variables use w..z, fewer start at x
        let offset = if n == 4 { 0 } else { 1 };
        ALIASES[i + offset].to_string()
    } else {
        format!("x{}", i + 1)
    }
}

pub(super) fn render(q: &QuadraticForm, alias: bool) -> String {
    let n = q.n();
    let mut out = String::new();
    for j in 0..n {
        for i in 0..=j {
            let c = q.coeff(i, j);
            if c == 0 {
                continue;
            }
            let monomial = if i == j {
                format!("{}^2", var_name(i, n, alias))
            } else {
                format!("{}*{}", var_name(i, n, alias), var_name(j, n, alias))
            };
            let sep = match (out.is_empty(), c < 0, alias) {
                (true, false, _) => "",
                (true, true, _) => "-",
                (false, false, false) => " + ",
                (false, true, false) => " - ",
                (false, false, true) => "+",
                (false, true, true) => "-",
            };
            out.push_str(sep);
            if c.abs() != 1 {
                out.push_str(&format!("{}*", c.abs()));
            }
            out.push_str(&monomial);
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Var {
    Indexed(usize),
    Alias(usize),
}

/// Parses a form. The variable count is the largest index used, or for
/// aliases the span from the first to the last letter used.
pub fn parse_form(text: &str) -> Result<QuadraticForm, QformError> {
    let err = |msg: String| QformError::Parse(msg);
    let chars: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
    if chars.is_empty() {
        return Err(err("empty input".into()));
    }
    let mut terms: Vec<(i64, Vec<Var>)> = Vec::new();
    let mut pos = 0;
    while pos < chars.len() {
        let mut sign = 1i64;
        match chars[pos] {
            '+' if !terms.is_empty() => pos += 1,
            '-' => {
                sign = -1;
                pos += 1;
            }
            _ if terms.is_empty() => {}
            c => return Err(err(format!("expected `+` or `-`, found {c:?}"))),
        }
        let mut coef = sign;
        let mut vars = Vec::new();
        let mut factors = 0;
        while pos < chars.len() && chars[pos] != '+' && chars[pos] != '-' {
            let c = chars[pos];
            if c == '*' {
                pos += 1;
                continue;
            }
            if c.is_ascii_digit() {
                let start = pos;
                while pos < chars.len() && chars[pos].is_ascii_digit() {
                    pos += 1;
                }
                let v: i64 = chars[start..pos]
                    .iter()
                    .collect::<String>()
                    .parse()
                    .map_err(|_| err("coefficient out of range".into()))?;
                coef = coef.checked_mul(v).ok_or_else(|| err("coefficient out of range".into()))?;
            } else if let Some(a) = ALIASES.iter().position(|&l| l == c) {
                pos += 1;
                let var = if c == 'x' && pos < chars.len() && chars[pos].is_ascii_digit() {
                    let start = pos;
                    while pos < chars.len() && chars[pos].is_ascii_digit() {
                        pos += 1;
                    }
                    let idx: usize = chars[start..pos].iter().collect::<String>().parse().unwrap_or(0);
                    if idx == 0 {
                        return Err(err("variables are numbered from x1".into()));
                    }
                    Var::Indexed(idx - 1)
                } else {
                    Var::Alias(a)
                };
                let mut power = 1;
                if pos < chars.len() && chars[pos] == '^' {
                    pos += 1;
                    match chars.get(pos) {
                        Some('1') => power = 1,
                        Some('2') => power = 2,
                        _ => return Err(err("only exponents 1 and 2 are allowed".into())),
                    }
                    pos += 1;
                } else if pos < chars.len() && chars[pos] == '²' {
                    pos += 1;
                    power = 2;
                }
                for _ in 0..power {
                    vars.push(var);
                }
            } else {
                return Err(err(format!("unexpected character {c:?}")));
            }
            factors += 1;
        }
        if factors == 0 {
            return Err(err("empty term".into()));
        }
        terms.push((coef, vars));
    }

    if terms.len() == 1 && terms[0].0 == 0 && terms[0].1.is_empty() {
        return Ok(QuadraticForm::empty());
    }
    let all: Vec<Var> = terms.iter().flat_map(|(_, v)| v.iter().copied()).collect();
    let indexed = all.iter().any(|v| matches!(v, Var::Indexed(_)));
    let aliased = all.iter().any(|v| matches!(v, Var::Alias(_)));
    if indexed && aliased {
        return Err(err("cannot mix `x1..xn` names with `w,x,y,z` aliases".into()));
    }
    let (base, n) = if aliased {
        let lo = all.iter().map(|v| if let Var::Alias(a) = v { *a } else { 0 }).min().unwrap_or(0);
        let hi = all.iter().map(|v| if let Var::Alias(a) = v { *a } else { 0 }).max().unwrap_or(0);
        (lo, hi - lo + 1)
    } else {
        (0, all.iter().map(|v| if let Var::Indexed(i) = v { *i + 1 } else { 0 }).max().unwrap_or(0))
    };
    let index = |v: &Var| match v {
        Var::Indexed(i) => *i,
        Var::Alias(a) => a - base,
    };
    let mut coeffs = Vec::new();
    for (c, vars) in &terms {
        if vars.len() != 2 {
            return Err(err(format!("term of degree {} (forms are homogeneous quadratic)", vars.len())));
        }
        let (i, j) = (index(&vars[0]), index(&vars[1]));
        coeffs.push((i.min(j), i.max(j), *c));
    }
    QuadraticForm::from_coeffs(n, &coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn printer_formats() {
        let q = parse_form("w^2+2x^2+xy+3y^2+wz+6z^2").unwrap();
        assert_eq!(q.to_string(), "x1^2 + 2*x2^2 + x2*x3 + 3*x3^2 + x1*x4 + 6*x4^2");
        assert_eq!(q.to_alias_string(), "w^2+2*x^2+x*y+3*y^2+w*z+6*z^2");
        let q = parse_form("x^2 - 2xy + 3y^2").unwrap();
        assert_eq!(q.to_string(), "x1^2 - 2*x1*x2 + 3*x2^2");
        assert_eq!(q.to_alias_string(), "x^2-2*x*y+3*y^2");
        assert_eq!(QuadraticForm::empty().to_string(), "0");
    }

    #[test]
    fn parser_variants() {
        let a = parse_form("w²+wx+x²").unwrap();
        let b = parse_form("x1^2 + x1*x2 + x2^2").unwrap();
        assert_eq!(a, b);
        assert_eq!(parse_form("x^2+2y^2").unwrap().n(), 2);
        assert_eq!(parse_form("2*x3^2").unwrap().n(), 3);
        assert_eq!(parse_form("x*x").unwrap(), parse_form("x^2").unwrap());
        assert_eq!(parse_form("0").unwrap(), QuadraticForm::empty());
    }

    #[test]
    fn parser_errors() {
        assert!(parse_form("").is_err());
        assert!(parse_form("x^3").is_err());
        assert!(parse_form("x^2+x").is_err());
        assert!(parse_form("x^2+x1^2").is_err());
        assert!(parse_form("x^2+q^2").is_err());
        assert!(parse_form("x^2++y^2").is_err());
        assert!(parse_form("x0^2").is_err());
        assert!(matches!(parse_form("x^2-y^2"), Err(QformError::Indefinite)));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn printer_round_trips(n in 1usize..=6, seed in prop::collection::vec(-9i64..=9, 21), diag in prop::collection::vec(1i64..=30, 6)) {
                // diagonally dominant, so positive definite and every variable appears
                let mut terms = Vec::new();
                let mut k = 0;
                for i in 0..n {
                    terms.push((i, i, diag[i] + 10 * n as i64));
                    for j in i + 1..n {
                        terms.push((i, j, seed[k]));
                        k += 1;
                    }
                }
                let q = QuadraticForm::from_coeffs(n, &terms).unwrap();
                prop_assert_eq!(parse_form(&q.to_string()).unwrap(), q.clone());
                prop_assert_eq!(parse_form(&q.to_alias_string()).unwrap(), q);
            }
        }
    }
}
