use std::fmt::Debug;

/// Exact field used by the linear algebra routines.
pub trait Field: Clone + PartialEq + Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn inv(&self) -> Self;
    fn plus(&self, o: &Self) -> Self;
    fn minus(&self, o: &Self) -> Self;
    fn times(&self, o: &Self) -> Self;
    fn negate(&self) -> Self;
}

macro_rules! field_ops_from_std {
    () => {
        fn plus(&self, o: &Self) -> Self {
            self + o
        }
        fn minus(&self, o: &Self) -> Self {
            self - o
        }
        fn times(&self, o: &Self) -> Self {
            self * o
        }
        fn negate(&self) -> Self {
            -self
        }
    };
}
pub(crate) use field_ops_from_std;
