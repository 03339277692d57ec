use crate::bpk::Registrant;
use crate::params::Params;
use crate::zkaok::{AokMsg, AokStatement, IdealLedger, Tag};

/// How a state machine reaches the ideal functionality.
pub trait AokChannel {
    /// Hands an outgoing proof to the functionality; returns what goes on the
    /// wire.
    fn submit(&mut self, entry_id: &str, msg: AokMsg) -> AokMsg;
    fn accepts(&self, msg: &AokMsg, tag: &Tag, statement: &AokStatement) -> bool;
}

/// Channel for honest parties: proofs land in the ledger and verification
/// consults it.
pub struct LedgerChannel<'a> {
    pub params: &'a Params,
    pub ledger: &'a mut IdealLedger,
}

impl AokChannel for LedgerChannel<'_> {
    fn submit(&mut self, entry_id: &str, msg: AokMsg) -> AokMsg {
        self.ledger.intercept(self.params, entry_id, Registrant::Honest, msg)
    }

    fn accepts(&self, msg: &AokMsg, tag: &Tag, statement: &AokStatement) -> bool {
        self.ledger.accepts(msg, tag, statement)
    }
}

/// Channel for machines run inside an adversary: submissions leave as they
/// are (the event loop converts them on delivery) and notifications are
/// taken at face value.
#[derive(Clone, Copy, Debug, Default)]
pub struct NotifiedChannel;

impl AokChannel for NotifiedChannel {
    fn submit(&mut self, _entry_id: &str, msg: AokMsg) -> AokMsg {
        msg
    }

    fn accepts(&self, msg: &AokMsg, tag: &Tag, statement: &AokStatement) -> bool {
        msg.notified_accept(tag, statement)
    }
}
