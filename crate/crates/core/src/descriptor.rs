//! Compact text form of [`KernelDescriptor`].
//!
//! ```text
//! desc   := atom | 'lin:' term ('+' term)* | 'geo:' factor ('*' factor)*
//! term   := number '*' factor
//! factor := atom | '(' desc ')'
//! atom   := 'hc' | 'mb' | 'cb' | 'zero'
//!         | 'lp:' (number | 'inf')
//!         | 'gmean' [':' number (',' number)*]
//! ```
//!
//! Examples: `hc`, `lp:2`, `lin:0.5*hc+0.5*mb`, `geo:hc*(lin:1*mb+2*lp:inf)`.
//! Whitespace between tokens is ignored.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};
use crate::kernel::KernelDescriptor;

impl fmt::Display for KernelDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::MaxBased => f.write_str("mb"),
            Self::CardBased => f.write_str("cb"),
            Self::HCategorizer => f.write_str("hc"),
            Self::GeometricMean { scales } => {
                f.write_str("gmean")?;
                for (k, b) in scales.iter().enumerate() {
                    f.write_str(if k == 0 { ":" } else { "," })?;
                    write!(f, "{b}")?;
                }
                Ok(())
            }
            Self::LpNorm(p) if p.is_infinite() => f.write_str("lp:inf"),
            Self::LpNorm(p) => write!(f, "lp:{p}"),
            Self::LinearCombination(terms) if terms.is_empty() => f.write_str("zero"),
            Self::LinearCombination(terms) => {
                f.write_str("lin:")?;
                for (k, (lambda, d)) in terms.iter().enumerate() {
                    if k > 0 {
                        f.write_str("+")?;
                    }
                    write!(f, "{lambda}*")?;
                    write_factor(f, d)?;
                }
                Ok(())
            }
            Self::GeometricCombination(parts) => {
                f.write_str("geo:")?;
                for (k, d) in parts.iter().enumerate() {
                    if k > 0 {
                        f.write_str("*")?;
                    }
                    write_factor(f, d)?;
                }
                Ok(())
            }
        }
    }
}

fn write_factor(f: &mut fmt::Formatter<'_>, d: &KernelDescriptor) -> fmt::Result {
    match d {
        KernelDescriptor::LinearCombination(t) if !t.is_empty() => write!(f, "({d})"),
        KernelDescriptor::GeometricCombination(_) => write!(f, "({d})"),
        _ => write!(f, "{d}"),
    }
}

impl FromStr for KernelDescriptor {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut p = Parser { text, pos: 0 };
        let d = p.desc()?;
        p.skip_ws();
        if p.pos != text.len() {
            return Err(p.error("unexpected trailing input"));
        }
        d.validate()?;
        Ok(d)
    }
}

struct Parser<'a> {
    text: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> Error {
        Error::DescriptorSyntax {
            position: self.pos,
            message: message.to_string(),
        }
    }

    fn rest(&self) -> &str {
        &self.text[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.text.len() - trimmed.len();
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<()> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(self.error(&alloc::format!("expected `{token}`")))
        }
    }

    fn desc(&mut self) -> Result<KernelDescriptor> {
        if self.eat("lin:") {
            let mut terms = Vec::new();
            loop {
                let lambda = self.number()?;
                self.expect("*")?;
                terms.push((lambda, self.factor()?));
                if !self.eat("+") {
                    break;
                }
            }
            Ok(KernelDescriptor::LinearCombination(terms))
        } else if self.eat("geo:") {
            let mut parts = alloc::vec![self.factor()?];
            while self.eat("*") {
                parts.push(self.factor()?);
            }
            Ok(KernelDescriptor::GeometricCombination(parts))
        } else {
            self.factor()
        }
    }

    fn factor(&mut self) -> Result<KernelDescriptor> {
        if self.eat("(") {
            let d = self.desc()?;
            self.expect(")")?;
            return Ok(d);
        }
        self.skip_ws();
        let word_len = self
            .rest()
            .find(|c: char| !c.is_ascii_alphanumeric())
            .unwrap_or(self.rest().len());
        let word: String = self.rest()[..word_len].to_string();
        let start = self.pos;
        self.pos += word_len;
        match word.as_str() {
            "hc" => Ok(KernelDescriptor::HCategorizer),
            "mb" => Ok(KernelDescriptor::MaxBased),
            "cb" => Ok(KernelDescriptor::CardBased),
            "zero" => Ok(KernelDescriptor::zero()),
            "lp" => {
                self.expect(":")?;
                if self.eat("inf") {
                    Ok(KernelDescriptor::LpNorm(f64::INFINITY))
                } else {
                    Ok(KernelDescriptor::LpNorm(self.number()?))
                }
            }
            "gmean" => {
                let mut scales = Vec::new();
                if self.eat(":") {
                    scales.push(self.number()?);
                    while self.eat(",") {
                        scales.push(self.number()?);
                    }
                }
                Ok(KernelDescriptor::GeometricMean { scales })
            }
            _ => {
                self.pos = start;
                Err(self.error("expected a kernel name (hc, mb, cb, zero, lp, gmean, lin, geo)"))
            }
        }
    }

    fn number(&mut self) -> Result<f64> {
        self.skip_ws();
        let bytes = self.rest().as_bytes();
        let mut len = 0;
        while len < bytes.len() {
            let c = bytes[len];
            let sign_after_exp = (c == b'+' || c == b'-') && len > 0 && matches!(bytes[len - 1], b'e' | b'E');
            let leading_sign = c == b'-' && len == 0;
            if c.is_ascii_digit() || c == b'.' || c == b'e' || c == b'E' || sign_after_exp || leading_sign {
                len += 1;
            } else {
                break;
            }
        }
        let value = self.rest()[..len]
            .parse::<f64>()
            .map_err(|_| self.error("expected a number"))?;
        self.pos += len;
        Ok(value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use KernelDescriptor::*;

    fn parse(s: &str) -> KernelDescriptor {
        s.parse().unwrap()
    }

    #[test]
    fn parses_atoms() {
        assert_eq!(parse("hc"), HCategorizer);
        assert_eq!(parse(" mb "), MaxBased);
        assert_eq!(parse("cb"), CardBased);
        assert_eq!(parse("lp:2"), LpNorm(2.0));
        assert_eq!(parse("lp:inf"), LpNorm(f64::INFINITY));
        assert_eq!(parse("gmean"), GeometricMean { scales: vec![] });
        assert_eq!(parse("gmean:1,2.5"), GeometricMean { scales: vec![1.0, 2.5] });
        assert_eq!(parse("zero"), KernelDescriptor::zero());
    }

    #[test]
    fn parses_combinations() {
        assert_eq!(
            parse("lin:0.5*hc+0.5*mb"),
            LinearCombination(vec![(0.5, HCategorizer), (0.5, MaxBased)])
        );
        assert_eq!(
            parse("geo:hc*(lin:1e-1*lp:3+2*cb)"),
            GeometricCombination(vec![
                HCategorizer,
                LinearCombination(vec![(0.1, LpNorm(3.0)), (2.0, CardBased)])
            ])
        );
    }

    #[test]
    fn rejects_bad_text() {
        assert!(matches!(
            "".parse::<KernelDescriptor>(),
            Err(Error::DescriptorSyntax { .. })
        ));
        assert!(matches!(
            "hx".parse::<KernelDescriptor>(),
            Err(Error::DescriptorSyntax { position: 0, .. })
        ));
        assert!(matches!(
            "hc mb".parse::<KernelDescriptor>(),
            Err(Error::DescriptorSyntax { .. })
        ));
        assert!(matches!(
            "lin:hc".parse::<KernelDescriptor>(),
            Err(Error::DescriptorSyntax { .. })
        ));
        assert_eq!(
            "lin:-1*hc".parse::<KernelDescriptor>().unwrap_err(),
            Error::NegativeCoefficient(-1.0)
        );
        assert!(matches!(
            "lp:0.5".parse::<KernelDescriptor>(),
            Err(Error::InvalidKernelParameter(_))
        ));
        assert!("geo:".parse::<KernelDescriptor>().is_err());
    }

    #[test]
    fn display_round_trips() {
        for text in [
            "hc",
            "lp:inf",
            "lp:2.5",
            "gmean:1,2",
            "zero",
            "lin:0.5*hc+0.5*mb",
            "geo:hc*(lin:0.25*cb+1*(geo:mb*lp:1))",
        ] {
            let d = parse(text);
            assert_eq!(d.to_string(), text);
            assert_eq!(parse(&d.to_string()), d);
        }
    }
}
