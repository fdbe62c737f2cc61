use num::{BigInt, BigRational, Complex, One, Zero};
use rand::Rng;

use crate::linalg::{format_rational, Rational};

/// Exact complex rationals `a + bi`.
pub type Gaussian = Complex<BigRational>;

pub fn gaussian(re: Rational, im: Rational) -> Gaussian {
    Complex::new(re, im)
}

pub fn real(n: i64) -> Gaussian {
    Complex::new(
        BigRational::from_integer(BigInt::from(n)),
        BigRational::zero(),
    )
}

/// `i^k`.
pub fn i_pow(k: usize) -> Gaussian {
    let (o, z) = (BigRational::one(), BigRational::zero());
    match k % 4 {
        0 => Complex::new(o, z),
        1 => Complex::new(z, o),
        2 => Complex::new(-o, z),
        _ => Complex::new(z, -o),
    }
}

/// `a/b + (c/d) i` with small numerators; zero with probability about 1/11.
pub fn random_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Gaussian {
    let part = |rng: &mut R| {
        BigRational::new(
            BigInt::from(rng.gen_range(-5i64..=5)),
            BigInt::from(rng.gen_range(1i64..=3)),
        )
    };
    let re = part(rng);
    let im = part(rng);
    Complex::new(re, im)
}

pub fn format_gaussian(z: &Gaussian) -> String {
    match (z.re.is_zero(), z.im.is_zero()) {
        (_, true) => format_rational(&z.re),
        (true, false) => format!("{}i", format_rational(&z.im)),
        _ => format!(
            "{}{}{}i",
            format_rational(&z.re),
            if z.im > BigRational::zero() { "+" } else { "" },
            format_rational(&z.im)
        ),
    }
}
