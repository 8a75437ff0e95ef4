//! Seeded bit interleaver `b = b' Pi`.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Permutation `pi` with `interleave(x)[i] = x[pi[i]]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interleaver {
    perm: Vec<usize>,
    inverse: Vec<usize>,
}

impl Interleaver {
    /// Pseudo-random permutation of `0..len`, fixed by `seed`.
    pub fn new(len: usize, seed: u64) -> Self {
        let mut perm: Vec<usize> = (0..len).collect();
        perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        Self::from_permutation(perm).expect("shuffle yields a permutation")
    }

    pub fn identity(len: usize) -> Self {
        Self::from_permutation((0..len).collect()).expect("identity is a permutation")
    }

    pub fn from_permutation(perm: Vec<usize>) -> Result<Self> {
        let mut inverse = vec![usize::MAX; perm.len()];
        for (i, &p) in perm.iter().enumerate() {
            if p >= perm.len() || inverse[p] != usize::MAX {
                return Err(Error::InvalidParameter("not a permutation".into()));
            }
            inverse[p] = i;
        }
        Ok(Self { perm, inverse })
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    pub fn permutation(&self) -> &[usize] {
        &self.perm
    }

    pub fn interleave_into<T: Copy>(&self, x: &[T], out: &mut [T]) -> Result<()> {
        self.check(x.len(), out.len())?;
        for (o, &p) in out.iter_mut().zip(&self.perm) {
            *o = x[p];
        }
        Ok(())
    }

    pub fn deinterleave_into<T: Copy>(&self, x: &[T], out: &mut [T]) -> Result<()> {
        self.check(x.len(), out.len())?;
        for (o, &p) in out.iter_mut().zip(&self.inverse) {
            *o = x[p];
        }
        Ok(())
    }

    pub fn interleave<T: Copy + Default>(&self, x: &[T]) -> Result<Vec<T>> {
        let mut out = vec![T::default(); self.len()];
        self.interleave_into(x, &mut out)?;
        Ok(out)
    }

    pub fn deinterleave<T: Copy + Default>(&self, x: &[T]) -> Result<Vec<T>> {
        let mut out = vec![T::default(); self.len()];
        self.deinterleave_into(x, &mut out)?;
        Ok(out)
    }

    fn check(&self, input: usize, output: usize) -> Result<()> {
        if input != self.len() {
            return Err(Error::dim(self.len(), input));
        }
        if output != self.len() {
            return Err(Error::dim(self.len(), output));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let il = Interleaver::new(100, 7);
        let x: Vec<u32> = (0..100).collect();
        let y = il.interleave(&x).unwrap();
        assert_ne!(x, y);
        assert_eq!(il.deinterleave(&y).unwrap(), x);
    }

    #[test]
    fn identity_is_noop() {
        let il = Interleaver::identity(10);
        let x: Vec<f64> = (0..10).map(f64::from).collect();
        assert_eq!(il.interleave(&x).unwrap(), x);
    }

    #[test]
    fn seed_changes_permutation() {
        let a = Interleaver::new(64, 1);
        let b = Interleaver::new(64, 2);
        let dist = a.permutation().iter().zip(b.permutation()).filter(|(x, y)| x != y).count();
        assert!(dist > 0);
    }

    #[test]
    fn length_mismatch() {
        assert!(Interleaver::new(8, 0).interleave(&[0u8; 7]).is_err());
    }
}
