use indexmap::IndexMap;

use crate::error::{Error, Result};
use crate::relation::Relation;

/// A finite domain together with named relations over it.
///
/// Relation names are unique and keep their insertion order, which is also the
/// order used when serializing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Template {
    domain_size: u8,
    relations: IndexMap<String, Relation>,
}

impl Template {
    pub fn new<I, S>(domain_size: u8, relations: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, Relation)>,
        S: Into<String>,
    {
        let mut map = IndexMap::new();
        for (name, rel) in relations {
            let name = name.into();
            if rel.domain_size() != domain_size {
                return Err(Error::DomainMismatch { left: domain_size, right: rel.domain_size() });
            }
            if !valid_name(&name) {
                return Err(Error::InvalidTemplate(format!("bad relation name `{name}`")));
            }
            if map.insert(name.clone(), rel).is_some() {
                return Err(Error::InvalidTemplate(format!("duplicate relation name `{name}`")));
            }
        }
        if map.is_empty() {
            return Err(Error::InvalidTemplate("a template needs at least one relation".into()));
        }
        Ok(Template { domain_size, relations: map })
    }

    /// Template with a single relation.
    pub fn single(name: &str, rel: Relation) -> Self {
        Self::new(rel.domain_size(), [(name, rel)]).expect("single relation template")
    }

    pub fn domain_size(&self) -> u8 {
        self.domain_size
    }

    pub fn get(&self, name: &str) -> Result<&Relation> {
        self.relations.get(name).ok_or_else(|| Error::UnknownSymbol(name.to_string()))
    }

    pub fn contains_name(&self, name: &str) -> bool {
        self.relations.contains_key(name)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Relation)> + '_ {
        self.relations.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn names(&self) -> impl Iterator<Item = &str> + '_ {
        self.relations.keys().map(String::as_str)
    }

    pub fn relations(&self) -> Vec<Relation> {
        self.relations.values().cloned().collect()
    }

    pub fn len(&self) -> usize {
        self.relations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.relations.is_empty()
    }

    pub fn max_arity(&self) -> usize {
        self.relations.values().map(Relation::arity).max().unwrap_or(0)
    }

    /// Name under which `rel` appears, if any relation has exactly this content.
    pub fn find(&self, rel: &Relation) -> Option<&str> {
        self.relations.iter().find(|(_, r)| *r == rel).map(|(k, _)| k.as_str())
    }

    /// Adds a relation under `name`, or returns the existing name if the same
    /// relation is already present. A clash on name with different content
    /// picks a fresh name by appending primes.
    pub fn insert_or_reuse(&mut self, name: &str, rel: Relation) -> Result<String> {
        if rel.domain_size() != self.domain_size {
            return Err(Error::DomainMismatch { left: self.domain_size, right: rel.domain_size() });
        }
        if let Some(existing) = self.find(&rel) {
            return Ok(existing.to_string());
        }
        let mut fresh = name.to_string();
        while self.relations.contains_key(&fresh) {
            fresh.push('\'');
        }
        self.relations.insert(fresh.clone(), rel);
        Ok(fresh)
    }
}

/// Names must be non-empty, free of whitespace and formula punctuation, and
/// must not start with the comment marker `#`.
pub fn valid_name(name: &str) -> bool {
    !name.is_empty() && !name.starts_with('#') && !name.chars().any(|c| c.is_whitespace() || "()&=,".contains(c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relation::named;

    #[test]
    fn rejects_empty_and_duplicates() {
        assert!(Template::new(2, Vec::<(String, Relation)>::new()).is_err());
        assert!(Template::new(2, [("r", named::or2()), ("r", named::nae3())]).is_err());
        let ternary = Relation::equality(3);
        assert!(Template::new(2, [("eq", ternary)]).is_err());
    }

    #[test]
    fn insert_reuses_by_content() {
        let mut t = Template::single("or", named::or2());
        assert_eq!(t.insert_or_reuse("other", named::or2()).unwrap(), "or");
        assert_eq!(t.insert_or_reuse("or", named::nae3()).unwrap(), "or'");
        assert_eq!(t.len(), 2);
    }
}
