//! Parameter encodings and the packet dictionaries between them.

mod apacket;
mod lpacket;
mod param;
mod range;

pub use apacket::{apacket_block_counts, apacket_member, AParamCoh, EtaPrime};
pub use lpacket::{
    induced_limit_decompose, lds_from_packet, lds_to_packet, tempered_packet_members, PacketDatum,
};
pub use param::{Block, LdsEntry, LdsGroup, LdsParam, RepParam, Side, TemperedParam};
pub use range::{aq_normalize, range_classify, Range};
