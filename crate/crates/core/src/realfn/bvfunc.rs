use crate::error::{Error, Result};
use crate::realfn::density::Density;
use crate::realfn::handle::RealFn;
use crate::realfn::piecewise::PiecewisePolynomial;
use crate::realfn::polynomial::Polynomial;
use crate::realfn::staircase::{SingularStaircase, StaircaseBase, CLASSICAL_RADIX};
use crate::scalar::{lit, sort_dedup, Scalar};

/// Continuous function of bounded variation on `[0, 1]` in Lebesgue normal
/// form: an absolutely continuous piecewise polynomial plus a sum of
/// singular staircases.
#[derive(Debug, Clone, PartialEq)]
pub struct BvFunc<T> {
    ac: PiecewisePolynomial<T>,
    singular: Vec<SingularStaircase<T>>,
}

impl<T: Scalar> BvFunc<T> {
    pub fn new(ac: PiecewisePolynomial<T>, mut singular: Vec<SingularStaircase<T>>) -> Self {
        singular.retain(|s| !s.scale().is_zero());
        // canonical order: sums over staircases are then independent of how
        // the function was assembled, up to the sign of each term
        singular.sort_by(|x, y| x.sort_key().partial_cmp(&y.sort_key()).unwrap_or(std::cmp::Ordering::Equal));
        Self { ac, singular }
    }

    pub fn zero() -> Self {
        Self::from_ac(PiecewisePolynomial::zero())
    }

    pub fn constant(c: T) -> Self {
        Self::from_ac(PiecewisePolynomial::constant(c))
    }

    pub fn from_ac(ac: PiecewisePolynomial<T>) -> Self {
        Self { ac, singular: Vec::new() }
    }

    pub fn from_polynomial(p: Polynomial<T>) -> Self {
        Self::from_ac(PiecewisePolynomial::from_polynomial(p))
    }

    pub fn from_staircase(s: SingularStaircase<T>) -> Self {
        Self::new(PiecewisePolynomial::zero(), vec![s])
    }

    /// The classical depth-truncated Cantor function as a `BvFunc`.
    pub fn cantor(depth: u32) -> Result<Self> {
        Ok(Self::from_staircase(SingularStaircase::cantor(depth)?))
    }

    /// `F_h(x) = F(x + h)` where `F` rises by `r/2` on `[1/6, 1/3]`, stays
    /// flat, and falls back to 0 on `[2/3, 5/6]`. Classical Cantor base.
    pub fn separated_family_member(r: T, h: T, depth: u32) -> Result<Self> {
        Self::separated_family_member_with_radix(r, h, depth, CLASSICAL_RADIX)
    }

    pub fn separated_family_member_with_radix(r: T, h: T, depth: u32, radix: u32) -> Result<Self> {
        if !(r > T::zero()) || !r.is_finite() {
            return Err(Error::Parameter(format!("r must be positive, got {r}")));
        }
        let sixth = T::one() / lit(6.0);
        if !(h.abs() <= sixth) {
            return Err(Error::Parameter(format!("|h| must be at most 1/6, got {h}")));
        }
        let half = r / lit(2.0);
        let third = T::one() / lit(3.0);
        let rise = SingularStaircase::new(StaircaseBase::Cantor, radix, depth, sixth, third, half, h)?;
        let fall = SingularStaircase::new(
            StaircaseBase::Cantor,
            radix,
            depth,
            lit::<T>(2.0) * third,
            lit::<T>(5.0) * sixth,
            -half,
            h,
        )?;
        Ok(Self::new(PiecewisePolynomial::zero(), vec![rise, fall]))
    }

    pub fn ac(&self) -> &PiecewisePolynomial<T> {
        &self.ac
    }

    pub fn singular(&self) -> &[SingularStaircase<T>] {
        &self.singular
    }

    pub fn is_absolutely_continuous(&self) -> bool {
        self.singular.is_empty()
    }

    /// Evaluates at `x ∈ [0, 1]`.
    pub fn eval(&self, x: T) -> Result<T> {
        if !(x >= T::zero() && x <= T::one()) {
            return Err(Error::Domain { x: x.as_f64(), lo: 0.0, hi: 1.0 });
        }
        Ok(self.value(x))
    }

    /// Unchecked evaluation; the ac part extrapolates outside `[0, 1]`.
    pub fn value(&self, x: T) -> T {
        self.singular.iter().fold(self.ac.eval(x), |acc, s| acc + s.eval(x))
    }

    pub fn scale(&self, k: T) -> Self {
        Self::new(self.ac.scale(k), self.singular.iter().map(|s| s.with_scale(s.scale() * k)).collect())
    }

    pub fn add_constant(&self, c: T) -> Self {
        Self { ac: self.ac.add_constant(c), singular: self.singular.clone() }
    }

    /// Pointwise `Σ c_i F_i`.
    pub fn linear_combine(coeffs: &[T], funcs: &[&BvFunc<T>]) -> Result<Self> {
        if coeffs.len() != funcs.len() {
            return Err(Error::LengthMismatch { left: coeffs.len(), right: funcs.len() });
        }
        if coeffs.is_empty() {
            return Err(Error::Parameter("linear combination of zero functions".into()));
        }
        let terms: Vec<(T, &PiecewisePolynomial<T>)> = coeffs.iter().zip(funcs).map(|(&c, f)| (c, &f.ac)).collect();
        let ac = PiecewisePolynomial::combine(&terms);
        let singular = coeffs
            .iter()
            .zip(funcs)
            .flat_map(|(&c, f)| f.singular.iter().map(move |s| s.with_scale(s.scale() * c)))
            .collect();
        Ok(Self::new(ac, singular))
    }

    /// `self − other`.
    pub fn sub(&self, other: &BvFunc<T>) -> Self {
        Self::linear_combine(&[T::one(), -T::one()], &[self, other]).expect("two terms")
    }

    /// Almost-everywhere derivative: the exact derivative of the ac part, zero
    /// off the singular active sets and undefined on them.
    pub fn derivative_ae(&self) -> Density<T> {
        Density { inner: self.ac.inner.map(|p| p.derivative()), singular: self.singular.clone() }
    }

    /// `(absolutely continuous part, singular part)`.
    pub fn lebesgue_parts(&self) -> (BvFunc<T>, BvFunc<T>) {
        (Self::from_ac(self.ac.clone()), Self::new(PiecewisePolynomial::zero(), self.singular.clone()))
    }
}

impl<T: Scalar> RealFn<T> for BvFunc<T> {
    fn eval(&self, x: T) -> T {
        self.value(x)
    }

    fn structural_variation(&self, lo: T, hi: T) -> Option<T> {
        crate::realfn::variation::structural_variation(self, lo, hi)
    }

    /// Ac breakpoints and critical points, staircase rise endpoints, and the
    /// points on a rise interval where the ac slope cancels the ramp.
    fn breakpoints(&self, lo: T, hi: T) -> Vec<T> {
        let mut pts = self.ac.structural_points(lo, hi);
        for s in &self.singular {
            pts.extend(s.breakpoints(lo, hi));
            let (h0, h1) = s.hull();
            let (h0, h1) = (h0.max(lo), h1.min(hi));
            if h0 >= h1 || self.ac.is_constant() {
                continue;
            }
            let slope = s.rise_slope();
            if self.ac.max_abs_slope(h0, h1) < slope.abs() * (T::one() - lit(1e-9)) {
                continue;
            }
            for (a, b) in s.rise_intervals(h0, h1) {
                let (a, b) = (a.max(h0), b.min(h1));
                let mut knots = vec![a];
                knots.extend(self.ac.inner.interior_breaks(a, b));
                knots.push(b);
                for w in knots.windows(2) {
                    let p = &self.ac.inner.polys[self.ac.inner.index((w[0] + w[1]) / lit(2.0))];
                    let shifted = p.derivative().add(&Polynomial::constant(slope));
                    pts.extend(shifted.roots_in(w[0], w[1]));
                }
            }
        }
        sort_dedup(&mut pts);
        pts.retain(|&x| x >= lo && x <= hi);
        pts
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cantor(d: u32) -> BvFunc<f64> {
        BvFunc::from_staircase(SingularStaircase::cantor(d).unwrap())
    }

    #[test]
    fn eval_rejects_outside_domain() {
        assert!(matches!(cantor(4).eval(1.5), Err(Error::Domain { .. })));
        assert!(cantor(4).eval(-0.1).is_err());
    }

    #[test]
    fn eval_cantor_values() {
        let c = cantor(20);
        assert_eq!(c.eval(0.0).unwrap(), 0.0);
        assert!((c.eval(0.5).unwrap() - 0.5).abs() < 1e-15);
        assert!((c.eval(2.0 / 9.0).unwrap() - 0.25).abs() < 1e-12);
    }

    #[test]
    fn combination_cancels() {
        let f = BvFunc::new(
            PiecewisePolynomial::from_polynomial(Polynomial::new(vec![0.1, 1.0, -1.0])),
            vec![SingularStaircase::cantor(7).unwrap()],
        );
        let z = BvFunc::linear_combine(&[1.0, -1.0], &[&f, &f]).unwrap();
        for i in 0..=50 {
            assert!(z.eval(i as f64 / 50.0).unwrap().abs() < 1e-15);
        }
        assert!(matches!(
            BvFunc::linear_combine(&[1.0], &[&f, &f]),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn lebesgue_parts_recombine() {
        let f = BvFunc::new(
            PiecewisePolynomial::from_polynomial(Polynomial::new(vec![0.0, 2.0])),
            vec![SingularStaircase::cantor(6).unwrap()],
        );
        let (ac, sing) = f.lebesgue_parts();
        assert!(sing.ac().is_zero());
        assert!(ac.singular().is_empty());
        for i in 0..=64 {
            let x = i as f64 / 64.0;
            assert_eq!(ac.value(x) + sing.value(x), f.value(x));
        }
        let (ac, sing) = cantor(5).lebesgue_parts();
        assert!(ac.ac().is_zero() && sing.singular().len() == 1);
    }

    #[test]
    fn separated_family_shape() {
        let f = BvFunc::<f64>::separated_family_member(1.0, 0.0, 12).unwrap();
        assert_eq!(f.eval(0.0).unwrap(), 0.0);
        assert_eq!(f.eval(1.0).unwrap(), 0.0);
        assert!((f.eval(0.5).unwrap() - 0.5).abs() < 1e-15);
        let g = BvFunc::<f64>::separated_family_member(2.0, 0.1, 12).unwrap();
        assert!((g.eval(0.4).unwrap() - f.eval(0.5).unwrap() * 2.0).abs() < 1e-14);
        assert!(BvFunc::separated_family_member(1.0, 0.2, 12).is_err());
        assert!(BvFunc::separated_family_member(0.0, 0.0, 12).is_err());
    }

    #[test]
    fn derivative_ae_flags_active_set() {
        let c = cantor(5);
        let d = c.derivative_ae();
        assert_eq!(d.eval(0.5), Some(0.0));
        assert_eq!(d.eval(0.0), None);
        let p = BvFunc::from_polynomial(Polynomial::new(vec![0.0, 1.0, -1.0]));
        assert_eq!(p.derivative_ae().eval(0.25), Some(0.5));
    }
}
