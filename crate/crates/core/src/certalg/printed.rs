//! Reference expansions, transcribed once and parsed on demand.

use super::poly::{parse, RatPoly};

/// Characteristic polynomial of the 4×4 block.
pub const CHARPOLY: &str = "(1-t)^2 - 2*(1-t+2*s*t)*lambda^2 + lambda^4";

pub const P1: &str = "r^4-4*r^3-4*r^2*s*t+2*r^2*t+4*r^2+8*r*s*t-4*r*t+4*s^2*t^2\
    -8*s^2*t+4*s^2-4*s*t^2+4*s*t-4*s+t^2";

pub const P2: &str = "r^4-4*r^3-2*r^2*s*t-2*r^2*s+2*r^2*t^2-2*r^2*t+6*r^2+4*r*s*t\
    +4*r*s-4*r*t^2+4*r*t-4*r+s^2*t^2-2*s^2*t+s^2-2*s*t^3+4*s*t^2\
    -4*s*t-2*s+t^4-2*t^3+3*t^2-2*t+1";

/// The four factors of the reference eliminant.
pub const ELIMINANT_FACTORS: [&str; 4] = [
    "(r-1)^2",
    "r^2-2*r-4*s+1",
    "r^4-4*r^3+4*r^2*s^2-6*r^2*s+6*r^2-8*r*s^2+12*r*s-4*r+4*s^4-4*s^3+5*s^2-6*s+1",
    "r^6-6*r^5+4*r^4*s^2-10*r^4*s+15*r^4-16*r^3*s^2+40*r^3*s-20*r^3+4*r^2*s^4\
    +108*r^2*s^3-79*r^2*s^2-28*r^2*s+15*r^2-8*r*s^4-216*r*s^3+190*r*s^2-24*r*s\
    -6*r-144*s^5+340*s^4-184*s^3+13*s^2+6*s+1",
];

fn must(text: &str) -> RatPoly {
    parse(text).expect("transcribed polynomial parses")
}

pub fn charpoly() -> RatPoly {
    must(CHARPOLY)
}

pub fn p1() -> RatPoly {
    must(P1)
}

pub fn p2() -> RatPoly {
    must(P2)
}

pub fn eliminant_factors() -> Vec<RatPoly> {
    ELIMINANT_FACTORS.iter().map(|f| must(f)).collect()
}

/// Product of the four factors.
pub fn eliminant() -> RatPoly {
    eliminant_factors()
        .iter()
        .fold(RatPoly::one(), |acc, f| &acc * f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certalg::poly::Var;

    #[test]
    fn transcription_shapes() {
        assert_eq!(p1().len(), 14);
        assert_eq!(p2().len(), 24);
        assert_eq!(p1().degree_in(Var::T), 2);
        assert_eq!(p2().degree_in(Var::T), 4);
        let degrees: Vec<(u32, u32)> = eliminant_factors()
            .iter()
            .map(|f| (f.degree_in(Var::R), f.degree_in(Var::S)))
            .collect();
        assert_eq!(degrees, vec![(2, 0), (2, 1), (4, 4), (6, 5)]);
        let terms: Vec<usize> = eliminant_factors().iter().map(RatPoly::len).collect();
        assert_eq!(terms, vec![3, 4, 13, 24]);
    }
}
