use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Role {
    L,
    R,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Registrant {
    Honest,
    Adversary,
}

/// A key registered in the file. Adversary keys are opaque and never
/// validated.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileEntry {
    pub id: usize,
    pub role: Role,
    pub registrant: Registrant,
    #[serde(serialize_with = "ser_hex", deserialize_with = "de_hex")]
    pub key: Vec<u8>,
}

impl fmt::Debug for FileEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FileEntry({}, {:?}, {:?}, {})", self.id, self.role, self.registrant, hex::encode(&self.key))
    }
}

fn ser_hex<S: Serializer>(v: &[u8], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&hex::encode(v))
}

fn de_hex<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<u8>, D::Error> {
    let s = String::deserialize(d)?;
    hex::decode(s).map_err(serde::de::Error::custom)
}

/// Registration-ordered key file. Ids are dense; the honest left key is 0 and
/// the honest right key is 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PublicFile {
    entries: Vec<FileEntry>,
    adversary_limit: usize,
    frozen: bool,
}

pub const HONEST_LEFT_ID: usize = 0;
pub const HONEST_RIGHT_ID: usize = 1;

impl PublicFile {
    pub fn new(pk_left: Vec<u8>, pk_right: Vec<u8>, adversary_limit: usize) -> Self {
        let entries = vec![
            FileEntry { id: HONEST_LEFT_ID, role: Role::L, registrant: Registrant::Honest, key: pk_left },
            FileEntry { id: HONEST_RIGHT_ID, role: Role::R, registrant: Registrant::Honest, key: pk_right },
        ];
        Self { entries, adversary_limit, frozen: false }
    }

    pub fn register(&mut self, role: Role, key: Vec<u8>) -> Result<usize> {
        if self.frozen {
            return Err(Error::PublicFile("file is frozen".into()));
        }
        if self.adversary_count() >= self.adversary_limit {
            return Err(Error::PublicFile(format!("at most {} adversary keys", self.adversary_limit)));
        }
        let id = self.entries.len();
        self.entries.push(FileEntry { id, role, registrant: Registrant::Adversary, key });
        Ok(id)
    }

    pub fn freeze(&mut self) {
        self.frozen = true;
    }

    pub fn is_frozen(&self) -> bool {
        self.frozen
    }

    pub fn entries(&self) -> &[FileEntry] {
        &self.entries
    }

    pub fn get(&self, id: usize) -> Option<&FileEntry> {
        self.entries.get(id)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn adversary_count(&self) -> usize {
        self.entries.iter().filter(|e| e.registrant == Registrant::Adversary).count()
    }
}

/// Builds the frozen file `F' + {PK_L, PK_R}`.
pub fn freeze_file(
    pk_left: Vec<u8>,
    pk_right: Vec<u8>,
    adversary_keys: Vec<(Role, Vec<u8>)>,
    limit: usize,
) -> Result<PublicFile> {
    let mut file = PublicFile::new(pk_left, pk_right, limit);
    for (role, key) in adversary_keys {
        file.register(role, key)?;
    }
    file.freeze();
    Ok(file)
}
