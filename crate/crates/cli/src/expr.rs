//! Parser for term formulas in the index variable `n`: integer and
//! rational literals, `+ - * /`, parentheses, and implicit multiplication
//! as in `2n` or `3(n+1)`. Everything is cleared to a single
//! numerator/denominator pair before the rational function is built, so
//! the result is validated once.

use num_bigint::BigInt;

use roughlat_core::exact::{Polynomial, Rational, RationalFunction};

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Int(BigInt),
    Var,
    Plus,
    Minus,
    Star,
    Slash,
    LParen,
    RParen,
}

fn tokenize(s: &str) -> Result<Vec<Token>, String> {
    let mut out = Vec::new();
    let mut chars = s.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            ' ' | '\t' => {
                chars.next();
            }
            '0'..='9' => {
                let mut digits = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_digit() {
                        digits.push(d);
                        chars.next();
                    } else {
                        break;
                    }
                }
                out.push(Token::Int(digits.parse().expect("digits")));
            }
            'n' => {
                chars.next();
                out.push(Token::Var);
            }
            '+' => {
                chars.next();
                out.push(Token::Plus);
            }
            '-' => {
                chars.next();
                out.push(Token::Minus);
            }
            '*' => {
                chars.next();
                out.push(Token::Star);
            }
            '/' => {
                chars.next();
                out.push(Token::Slash);
            }
            '(' => {
                chars.next();
                out.push(Token::LParen);
            }
            ')' => {
                chars.next();
                out.push(Token::RParen);
            }
            other => return Err(format!("unexpected character `{}`", other)),
        }
    }
    // implicit multiplication: 2n, 2(, n(, )( and )n
    let mut with_mul = Vec::with_capacity(out.len());
    for tok in out {
        if let Some(prev) = with_mul.last() {
            let left = matches!(prev, Token::Int(_) | Token::Var | Token::RParen);
            let right = matches!(tok, Token::Var | Token::LParen);
            if left && right {
                with_mul.push(Token::Star);
            }
        }
        with_mul.push(tok);
    }
    Ok(with_mul)
}

/// A fraction of polynomials under construction.
#[derive(Clone)]
struct Frac {
    num: Polynomial,
    den: Polynomial,
}

impl Frac {
    fn int(v: BigInt) -> Frac {
        Frac {
            num: Polynomial::constant(Rational::from_integer(v)),
            den: Polynomial::one(),
        }
    }

    fn var() -> Frac {
        Frac {
            num: Polynomial::var(),
            den: Polynomial::one(),
        }
    }

    fn add(&self, o: &Frac) -> Frac {
        Frac {
            num: self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            den: self.den.mul(&o.den),
        }
    }

    fn sub(&self, o: &Frac) -> Frac {
        self.add(&o.neg())
    }

    fn neg(&self) -> Frac {
        Frac {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    fn mul(&self, o: &Frac) -> Frac {
        Frac {
            num: self.num.mul(&o.num),
            den: self.den.mul(&o.den),
        }
    }

    fn div(&self, o: &Frac) -> Result<Frac, String> {
        if o.num.is_zero() {
            return Err("division by zero".into());
        }
        Ok(Frac {
            num: self.num.mul(&o.den),
            den: self.den.mul(&o.num),
        })
    }
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<Frac, String> {
        let mut acc = self.term()?;
        while let Some(op) = self.peek() {
            match op {
                Token::Plus => {
                    self.next();
                    acc = acc.add(&self.term()?);
                }
                Token::Minus => {
                    self.next();
                    acc = acc.sub(&self.term()?);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Frac, String> {
        let mut acc = self.unary()?;
        while let Some(op) = self.peek() {
            match op {
                Token::Star => {
                    self.next();
                    acc = acc.mul(&self.unary()?);
                }
                Token::Slash => {
                    self.next();
                    acc = acc.div(&self.unary()?)?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Frac, String> {
        match self.peek() {
            Some(Token::Minus) => {
                self.next();
                Ok(self.unary()?.neg())
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Frac, String> {
        match self.next() {
            Some(Token::Int(v)) => Ok(Frac::int(v)),
            Some(Token::Var) => Ok(Frac::var()),
            Some(Token::LParen) => {
                let inner = self.expr()?;
                match self.next() {
                    Some(Token::RParen) => Ok(inner),
                    _ => Err("missing `)`".into()),
                }
            }
            other => Err(format!("unexpected token {:?}", other)),
        }
    }
}

/// Parses one formula; the resulting function must be pole-free from
/// index 1.
pub fn parse_formula(s: &str) -> Result<RationalFunction, String> {
    let tokens = tokenize(s)?;
    if tokens.is_empty() {
        return Err("empty formula".into());
    }
    let mut p = Parser { tokens, pos: 0 };
    let frac = p.expr()?;
    if p.pos != p.tokens.len() {
        return Err(format!("trailing input after formula in `{}`", s));
    }
    RationalFunction::new(frac.num, frac.den, 1).map_err(|e| e.to_string())
}

/// Splits a parenthesized tuple at top-level commas: `(a, b, c)`.
pub fn split_tuple(s: &str) -> Result<Vec<&str>, String> {
    let s = s.trim();
    let inner = s
        .strip_prefix('(')
        .and_then(|t| t.strip_suffix(')'))
        .ok_or_else(|| format!("expected a parenthesized tuple, found `{}`", s))?;
    let mut parts = Vec::new();
    let mut depth = 0usize;
    let mut start = 0usize;
    for (i, c) in inner.char_indices() {
        match c {
            '(' | '[' | '{' => depth += 1,
            ')' | ']' | '}' => {
                depth = depth
                    .checked_sub(1)
                    .ok_or_else(|| "unbalanced brackets".to_string())?
            }
            ',' if depth == 0 => {
                parts.push(inner[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(inner[start..].trim());
    Ok(parts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use roughlat_core::exact::{rat, ratio};

    #[test]
    fn parses_common_forms() {
        assert_eq!(parse_formula("1/n").unwrap().eval(4).unwrap(), ratio(1, 4));
        assert_eq!(
            parse_formula("(4n+1)/n").unwrap().eval(1).unwrap(),
            rat(5)
        );
        assert_eq!(
            parse_formula("(2n+1)/n").unwrap().eval(2).unwrap(),
            ratio(5, 2)
        );
        assert_eq!(parse_formula("2/n + 1 - 1/n").unwrap().eval(3).unwrap(), ratio(4, 3));
        assert_eq!(parse_formula("-3").unwrap().eval(9).unwrap(), rat(-3));
        assert_eq!(parse_formula("0").unwrap().eval(1).unwrap(), rat(0));
        assert_eq!(
            parse_formula("3(n - 1)/(2n)").unwrap().eval(3).unwrap(),
            rat(1)
        );
    }

    #[test]
    fn rejects_garbage_and_poles() {
        assert!(parse_formula("").is_err());
        assert!(parse_formula("1/").is_err());
        assert!(parse_formula("x + 1").is_err());
        assert!(parse_formula("1/0").is_err());
        // pole at a positive integer
        assert!(parse_formula("1/(n-3)").is_err());
    }

    #[test]
    fn tuple_splitting() {
        assert_eq!(split_tuple("(1/n, 1/n)").unwrap(), vec!["1/n", "1/n"]);
        assert_eq!(
            split_tuple("((n+1)/n, 2)").unwrap(),
            vec!["(n+1)/n", "2"]
        );
        assert!(split_tuple("1, 2").is_err());
    }
}
