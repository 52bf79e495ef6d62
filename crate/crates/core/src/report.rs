use std::fmt;

/// A concrete counterexample to one obligation.
///
/// `items` names the offending objects, morphisms or elements in the order
/// the obligation quantifies over them, so that a caller can replay the
/// failing check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub items: Vec<String>,
    pub detail: String,
}

impl Witness {
    pub fn new<I, S>(items: I, detail: impl Into<String>) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Witness {
            items: items.into_iter().map(Into::into).collect(),
            detail: detail.into(),
        }
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}): {}", self.items.join(", "), self.detail)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Obligation {
    pub name: String,
    pub checked: usize,
    /// `None` means the obligation holds on every checked instance.
    pub witness: Option<Witness>,
}

impl Obligation {
    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }
}

/// Outcome of exhaustively checking a family of laws on one subject.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckReport {
    pub subject: String,
    pub obligations: Vec<Obligation>,
}

impl CheckReport {
    pub fn new(subject: impl Into<String>) -> Self {
        CheckReport {
            subject: subject.into(),
            obligations: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.obligations.iter().all(Obligation::passed)
    }

    pub fn obligation(&self, name: &str) -> Option<&Obligation> {
        self.obligations.iter().find(|o| o.name == name)
    }

    /// Starts an obligation; record instances on the returned builder.
    pub fn check(&mut self, name: impl Into<String>) -> ObligationBuilder<'_> {
        self.obligations.push(Obligation {
            name: name.into(),
            checked: 0,
            witness: None,
        });
        ObligationBuilder {
            ob: self.obligations.last_mut().expect("just pushed"),
        }
    }

    pub fn push_pass(&mut self, name: impl Into<String>, checked: usize) {
        self.obligations.push(Obligation {
            name: name.into(),
            checked,
            witness: None,
        });
    }

    pub fn push_fail(&mut self, name: impl Into<String>, witness: Witness) {
        self.obligations.push(Obligation {
            name: name.into(),
            checked: 1,
            witness: Some(witness),
        });
    }

    /// Folds another report in, prefixing its obligation names.
    pub fn absorb(&mut self, prefix: &str, other: CheckReport) {
        for mut ob in other.obligations {
            ob.name = format!("{prefix}{}", ob.name);
            self.obligations.push(ob);
        }
    }

    pub fn first_failure(&self) -> Option<&Obligation> {
        self.obligations.iter().find(|o| !o.passed())
    }
}

pub struct ObligationBuilder<'a> {
    ob: &'a mut Obligation,
}

impl ObligationBuilder<'_> {
    /// Records one checked instance. Only the first failure is kept, so the
    /// caller's enumeration order decides which witness is reported.
    pub fn instance(&mut self, ok: bool, witness: impl FnOnce() -> Witness) {
        self.ob.checked += 1;
        if !ok && self.ob.witness.is_none() {
            self.ob.witness = Some(witness());
        }
    }

    pub fn failed(&self) -> bool {
        self.ob.witness.is_some()
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        writeln!(f, "{verdict} {}", self.subject)?;
        for ob in &self.obligations {
            match &ob.witness {
                None => writeln!(f, "  [ok]   {} ({} checked)", ob.name, ob.checked)?,
                Some(w) => writeln!(f, "  [FAIL] {} witness {w}", ob.name)?,
            }
        }
        Ok(())
    }
}
