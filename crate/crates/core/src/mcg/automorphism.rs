use crate::error::{Error, Result};
use crate::word::{extend_inverse_reduced, extend_reduced, Genus, Letter, Word};

/// Default hard cap on the length of any generator image produced by
/// composition.
pub const DEFAULT_IMAGE_LIMIT: usize = 1_000_000;

/// An automorphism of the free group given by the images of the generators
/// together with the images under its inverse.
///
/// Two automorphisms compare equal iff all generator images agree, which for
/// the surface with one boundary component is equality of mapping classes.
#[derive(Clone, Debug)]
pub struct FreeAutomorphism {
    genus: Genus,
    images: Vec<Word>,
    inverse_images: Vec<Word>,
}

impl PartialEq for FreeAutomorphism {
    fn eq(&self, other: &Self) -> bool {
        self.genus == other.genus && self.images == other.images
    }
}

impl Eq for FreeAutomorphism {}

impl FreeAutomorphism {
    /// Checks that `inverse_images` really describe the inverse map, in both
    /// orders, before accepting the pair.
    pub fn new(genus: Genus, images: Vec<Word>, inverse_images: Vec<Word>) -> Result<Self> {
        let rank = genus.rank();
        if images.len() != rank || inverse_images.len() != rank {
            return Err(Error::NotAutomorphism(format!(
                "expected {rank} images and {rank} inverse images, got {} and {}",
                images.len(),
                inverse_images.len()
            )));
        }
        for w in images.iter().chain(&inverse_images) {
            genus.ensure_same(w.genus())?;
        }
        let f = FreeAutomorphism { genus, images, inverse_images };
        let inv = f.inverse();
        for j in 1..=rank {
            let x = Word::generator(genus, j)?;
            if inv.apply(&f.apply(&x)?)? != x || f.apply(&inv.apply(&x)?)? != x {
                return Err(Error::NotAutomorphism(format!("inverse images do not invert x{j}")));
            }
        }
        Ok(f)
    }

    pub fn identity(genus: Genus) -> Self {
        let images: Vec<Word> = (1..=genus.rank())
            .map(|j| Word::from_reduced(genus, vec![Letter::new(j, false)]))
            .collect();
        FreeAutomorphism { genus, inverse_images: images.clone(), images }
    }

    /// Inner automorphism `x ↦ w x w⁻¹`.
    pub fn inner(w: &Word) -> Self {
        let genus = w.genus();
        let winv = w.invert();
        let conj = |a: &Word, b: &Word| -> Vec<Word> {
            (1..=genus.rank())
                .map(|j| {
                    let mut buf = a.letters().to_vec();
                    crate::word::push_reduced(&mut buf, Letter::new(j, false));
                    extend_reduced(&mut buf, b.letters());
                    Word::from_reduced(genus, buf)
                })
                .collect()
        };
        FreeAutomorphism { genus, images: conj(w, &winv), inverse_images: conj(&winv, w) }
    }

    pub fn genus(&self) -> Genus {
        self.genus
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn inverse_images(&self) -> &[Word] {
        &self.inverse_images
    }

    /// Image of `x_j` (1-based).
    pub fn image(&self, j: usize) -> &Word {
        &self.images[j - 1]
    }

    pub fn max_image_len(&self) -> usize {
        self.images.iter().map(Word::len).max().unwrap_or(0)
    }

    pub fn is_identity(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(i, w)| w.len() == 1 && w.letters()[0] == Letter::new(i + 1, false))
    }

    pub fn apply(&self, w: &Word) -> Result<Word> {
        self.genus.ensure_same(w.genus())?;
        let letters = apply_letters(&self.images, w.letters(), usize::MAX)?;
        Ok(Word::from_reduced(self.genus, letters))
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &FreeAutomorphism) -> Result<Self> {
        self.compose_with_limit(other, DEFAULT_IMAGE_LIMIT)
    }

    pub fn compose_with_limit(&self, other: &FreeAutomorphism, limit: usize) -> Result<Self> {
        self.genus.ensure_same(other.genus)?;
        let images = other
            .images
            .iter()
            .map(|w| Ok(Word::from_reduced(self.genus, apply_letters(&self.images, w.letters(), limit)?)))
            .collect::<Result<Vec<_>>>()?;
        let inverse_images = self
            .inverse_images
            .iter()
            .map(|w| Ok(Word::from_reduced(self.genus, apply_letters(&other.inverse_images, w.letters(), limit)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(FreeAutomorphism { genus: self.genus, images, inverse_images })
    }

    pub fn inverse(&self) -> Self {
        FreeAutomorphism {
            genus: self.genus,
            images: self.inverse_images.clone(),
            inverse_images: self.images.clone(),
        }
    }

    /// `g ∘ self ∘ g⁻¹`.
    pub fn conjugate_by(&self, g: &FreeAutomorphism) -> Result<Self> {
        g.compose(self)?.compose(&g.inverse())
    }

    /// `self ∘ other ∘ self⁻¹ ∘ other⁻¹`.
    pub fn commutator(&self, other: &FreeAutomorphism) -> Result<Self> {
        let ab = self.compose(other)?;
        let ba = other.compose(self)?;
        ab.compose(&ba.inverse())
    }

    pub fn pow(&self, k: i64) -> Result<Self> {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut acc = FreeAutomorphism::identity(self.genus);
        for _ in 0..k.unsigned_abs() {
            acc = acc.compose(&base)?;
        }
        Ok(acc)
    }

    pub fn commutes_with(&self, other: &FreeAutomorphism) -> Result<bool> {
        Ok(self.compose(other)? == other.compose(self)?)
    }
}

/// Substitutes `images` into `letters` with free reduction on the fly.
pub(crate) fn apply_letters(images: &[Word], letters: &[Letter], limit: usize) -> Result<Vec<Letter>> {
    let mut buf = Vec::with_capacity(letters.len());
    for &l in letters {
        let img = images[l.generator() - 1].letters();
        if l.is_inverse() {
            extend_inverse_reduced(&mut buf, img);
        } else {
            extend_reduced(&mut buf, img);
        }
        if buf.len() > limit {
            return Err(Error::ImageTooLong { len: buf.len(), limit });
        }
    }
    Ok(buf)
}

/// Exact equality of automorphisms.
pub fn auto_equal(f: &FreeAutomorphism, g: &FreeAutomorphism) -> Result<bool> {
    f.genus.ensure_same(g.genus)?;
    Ok(f == g)
}
