//! Finite sample spaces and the structures defined on them: real-valued
//! variables and events (subsets of outcomes).
//!
//! A [`SampleSpace`] fixes a canonical outcome order at construction; every
//! argmax tie-break and every serialized listing follows that order. Spaces
//! are cheap to clone and compared structurally, so two scenarios parsed from
//! the same document interoperate.

use std::sync::Arc;

use crate::error::{Error, Result};

/// A finite, nonempty set of labelled outcomes in a fixed canonical order.
#[derive(Clone, Debug)]
pub struct SampleSpace {
    labels: Arc<Vec<String>>,
}

impl SampleSpace {
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::EmptySpace);
        }
        for (i, label) in labels.iter().enumerate() {
            if labels[..i].contains(label) {
                return Err(Error::DuplicateLabel(label.clone()));
            }
        }
        Ok(Self { labels: Arc::new(labels) })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    /// Always false: construction rejects empty spaces.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, index: usize) -> &str {
        &self.labels[index]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
}

impl PartialEq for SampleSpace {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.labels, &other.labels) || self.labels == other.labels
    }
}

impl Eq for SampleSpace {}

fn check_finite(context: &'static str, space: &SampleSpace, values: &[f64]) -> Result<()> {
    for (i, v) in values.iter().enumerate() {
        if !v.is_finite() {
            return Err(Error::NonFinite { context, label: space.label(i).to_owned() });
        }
    }
    Ok(())
}

/// A real-valued function on the outcomes of one space.
#[derive(Clone, Debug, PartialEq)]
pub struct Variable {
    space: SampleSpace,
    values: Vec<f64>,
}

impl Variable {
    /// Values given in the space's canonical order.
    pub fn new(space: &SampleSpace, values: Vec<f64>) -> Result<Self> {
        if values.len() != space.len() {
            return Err(Error::LengthMismatch { expected: space.len(), got: values.len() });
        }
        check_finite("variable", space, &values)?;
        Ok(Self { space: space.clone(), values })
    }

    /// Values given per label; every outcome must be covered exactly once.
    pub fn from_pairs<'a, I>(space: &SampleSpace, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a str, f64)>,
    {
        let mut values = vec![None; space.len()];
        for (label, v) in pairs {
            let idx = space.index_of(label).ok_or_else(|| Error::UnknownLabel(label.to_owned()))?;
            if values[idx].replace(v).is_some() {
                return Err(Error::DuplicateLabel(label.to_owned()));
            }
        }
        let values = values
            .into_iter()
            .enumerate()
            .map(|(i, v)| v.ok_or_else(|| Error::UnknownLabel(space.label(i).to_owned())))
            .collect::<Result<Vec<_>>>()?;
        Self::new(space, values)
    }

    pub fn constant(space: &SampleSpace, value: f64) -> Result<Self> {
        Self::new(space, vec![value; space.len()])
    }

    pub fn space(&self) -> &SampleSpace {
        &self.space
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, index: usize) -> f64 {
        self.values[index]
    }
}

/// A subset of one space's outcomes.
#[derive(Clone, Debug, PartialEq)]
pub struct Event {
    space: SampleSpace,
    mask: Vec<bool>,
}

impl Event {
    pub fn new<I, S>(space: &SampleSpace, members: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut mask = vec![false; space.len()];
        for label in members {
            let label = label.as_ref();
            let idx = space.index_of(label).ok_or_else(|| Error::UnknownLabel(label.to_owned()))?;
            mask[idx] = true;
        }
        Ok(Self { space: space.clone(), mask })
    }

    pub fn from_mask(space: &SampleSpace, mask: Vec<bool>) -> Result<Self> {
        if mask.len() != space.len() {
            return Err(Error::LengthMismatch { expected: space.len(), got: mask.len() });
        }
        Ok(Self { space: space.clone(), mask })
    }

    pub fn empty(space: &SampleSpace) -> Self {
        Self { space: space.clone(), mask: vec![false; space.len()] }
    }

    pub fn full(space: &SampleSpace) -> Self {
        Self { space: space.clone(), mask: vec![true; space.len()] }
    }

    pub fn space(&self) -> &SampleSpace {
        &self.space
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    pub fn contains_index(&self, index: usize) -> bool {
        self.mask[index]
    }

    pub fn contains(&self, label: &str) -> bool {
        self.space.index_of(label).map(|i| self.mask[i]).unwrap_or(false)
    }

    /// Number of member outcomes.
    pub fn len(&self) -> usize {
        self.mask.iter().filter(|&&m| m).count()
    }

    pub fn is_empty(&self) -> bool {
        self.mask.iter().all(|&m| !m)
    }

    /// Member labels in canonical order.
    pub fn members(&self) -> impl Iterator<Item = &str> {
        self.mask
            .iter()
            .enumerate()
            .filter(|(_, &m)| m)
            .map(|(i, _)| self.space.label(i))
    }

    pub fn complement(&self) -> Self {
        Self { space: self.space.clone(), mask: self.mask.iter().map(|&m| !m).collect() }
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch);
        }
        let mask = self.mask.iter().zip(&other.mask).map(|(&a, &b)| a || b).collect();
        Ok(Self { space: self.space.clone(), mask })
    }

    pub fn intersection(&self, other: &Self) -> Result<Self> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch);
        }
        let mask = self.mask.iter().zip(&other.mask).map(|(&a, &b)| a && b).collect();
        Ok(Self { space: self.space.clone(), mask })
    }

    pub fn is_subset_of(&self, other: &Self) -> Result<bool> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch);
        }
        Ok(self.mask.iter().zip(&other.mask).all(|(&a, &b)| !a || b))
    }
}
