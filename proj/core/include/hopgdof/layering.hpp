#pragma once

#include "hopgdof/rational.hpp"

#include <array>
#include <compare>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace hopgdof {

// Sub-message W_{user,index} or one of its halves W^1, W^2 (half = 0 for the whole message).
// user 0 marks forwarded receiver noise.
struct MsgId {
    int user = 0;
    int index = 0;
    int half = 0;

    static MsgId noise() { return {}; }
    bool is_noise() const { return user == 0; }
    MsgId parent() const { return {user, index, 0}; }
    MsgId with_half(int h) const { return {user, index, h}; }
    std::string str() const;
    friend auto operator<=>(const MsgId&, const MsgId&) = default;
};

using Knowledge = std::set<MsgId>;

// A message is known if it, its parent, or both of its halves are known.
bool covered(const Knowledge& known, const MsgId& id);

enum class LayerKind { fresh, relayed };

struct Child {
    MsgId id;
    Rational offset;  // <= 0, relative to the combination's top
    Rational gdof;
};

struct Layer {
    MsgId id;                    // unused for relayed combinations
    LayerKind kind = LayerKind::fresh;
    Rational top;                // transmit power exponent, <= 0
    Rational gdof;               // 0 for relayed combinations
    std::vector<Child> children; // relayed combinations only
    Rational shift = -1;         // relayed: amplification applied to the received residual
};

struct NodeId {
    int hop = 0;    // 0-based hop index
    int index = 1;  // 1 or 2
    friend auto operator<=>(const NodeId&, const NodeId&) = default;
};

struct TransmitPlan {
    NodeId node;
    std::vector<Layer> layers;
    bool sparse = false;  // gaps between consecutive fresh layers allowed
};

struct ViewEntry {
    MsgId id;
    Rational exponent;
    Rational gdof;
    int tx = 1;
    bool fresh = true;
};

struct ReceiverView {
    NodeId receiver;
    std::vector<ViewEntry> entries;  // sorted by exponent, descending
};

// One decode step; more than one id means simultaneous decoding of the group.
using DecodeStep = std::vector<MsgId>;

struct StepRecord {
    DecodeStep ids;
    Rational signal;
    Rational interference;  // max over undecoded others, floored at the noise level 0
    Rational sinr;
    Rational required;
    bool pass = false;
};

struct DecodeReport {
    std::vector<StepRecord> steps;
    Knowledge decoded;
    bool ok = true;
    int first_failure = -1;
    std::optional<Layer> residual;
};

std::optional<std::string> validate_plan(const TransmitPlan& plan);

// Plans must already be materialized (relayed layers carry their children).
ReceiverView received_view(const std::array<TransmitPlan, 2>& plans, const Rational& alpha,
                           int receiver_index);

DecodeReport decode_feasible(const ReceiverView& view, const std::vector<DecodeStep>& order);

// Undecoded entries above the noise floor, offsets relative to the largest.
// top is the largest received exponent; amplify() moves it.
std::optional<Layer> residual_after(const ReceiverView& view, const Knowledge& decoded);
Layer amplify(Layer residual, const Rational& target_top);

}  // namespace hopgdof
