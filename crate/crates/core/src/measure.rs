use num_traits::{One, Signed, Zero};

use crate::point::{BerkPoint, PrimeContext};
use crate::rational::Rational;

/// Finitely many weighted atoms at distinct points. Weights may be signed
/// (Laplacians) or form a probability vector (equilibrium measures).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DiscreteMeasure {
    atoms: Vec<(BerkPoint, Rational)>,
}

impl DiscreteMeasure {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn dirac(x: BerkPoint) -> Self {
        DiscreteMeasure { atoms: vec![(x, Rational::one())] }
    }

    /// Builds a measure, merging atoms at equal points and dropping zero weights.
    pub fn from_atoms(
        atoms: impl IntoIterator<Item = (BerkPoint, Rational)>,
        ctx: &PrimeContext,
    ) -> Self {
        let mut m = DiscreteMeasure::new();
        for (x, w) in atoms {
            m.add_atom(x, w, ctx);
        }
        m
    }

    pub fn add_atom(&mut self, x: BerkPoint, w: Rational, ctx: &PrimeContext) {
        if let Some(pos) = self.atoms.iter().position(|(y, _)| ctx.same_point(&x, y)) {
            self.atoms[pos].1 += w;
            if self.atoms[pos].1.is_zero() {
                self.atoms.remove(pos);
            }
        } else if !w.is_zero() {
            self.atoms.push((x, w));
        }
    }

    pub fn atoms(&self) -> &[(BerkPoint, Rational)] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn total_mass(&self) -> Rational {
        self.atoms.iter().map(|(_, w)| w).sum()
    }

    pub fn is_positive(&self) -> bool {
        self.atoms.iter().all(|(_, w)| w.is_positive())
    }

    pub fn is_probability(&self) -> bool {
        self.is_positive() && self.total_mass().is_one()
    }

    pub fn weight_at(&self, x: &BerkPoint, ctx: &PrimeContext) -> Rational {
        self.atoms
            .iter()
            .find(|(y, _)| ctx.same_point(x, y))
            .map(|(_, w)| w.clone())
            .unwrap_or_else(Rational::zero)
    }

    pub fn scaled(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return DiscreteMeasure::new();
        }
        DiscreteMeasure { atoms: self.atoms.iter().map(|(x, w)| (x.clone(), w * c)).collect() }
    }

    pub fn plus(&self, other: &Self, ctx: &PrimeContext) -> Self {
        DiscreteMeasure::from_atoms(self.atoms.iter().chain(&other.atoms).cloned(), ctx)
    }

    /// Equality as measures: same points (under the point predicate) with
    /// the same weights, regardless of atom order or disk representative.
    pub fn same_as(&self, other: &Self, ctx: &PrimeContext) -> bool {
        let diff = self.plus(&other.scaled(&-Rational::one()), ctx);
        diff.is_empty()
    }
}
