#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace bsim {

using AgentId = std::uint32_t;

enum class Side : std::uint8_t { Buy, Sell };

const char* to_string(Side side);

/// Belongings of one agent. Shares are whole units; cash is never negative.
struct AgentState {
  double cash = 0.0;
  std::int64_t shares = 0;

  friend bool operator==(const AgentState&, const AgentState&) = default;
};

/// A unit-size limit offer.
struct Order {
  AgentId agent_id = 0;
  Side side = Side::Buy;
  double price = 0.0;
  std::int64_t round = 0;
};

struct Trade {
  AgentId buyer_id = 0;
  AgentId seller_id = 0;
  double price = 0.0;
  std::int64_t round = 0;
  Side aggressor_side = Side::Buy;

  friend bool operator==(const Trade&, const Trade&) = default;
};

struct RestingOrder {
  AgentId agent_id = 0;
  double price = 0.0;
  std::uint64_t sequence = 0;  // submission order, earlier wins ties
  std::int64_t round = 0;

  friend bool operator==(const RestingOrder&, const RestingOrder&) = default;
};

enum class RejectReason : std::uint8_t {
  InfeasibleAggressor,  // buyer cannot pay its own price, or seller holds no share
  InvalidOrder,         // non-positive price or unknown agent
};

const char* to_string(RejectReason reason);

struct Executed {
  Trade trade;
};
struct Rested {};
struct Rejected {
  RejectReason reason;
};

using MatchOutcome = std::variant<Executed, Rested, Rejected>;

/// Cleared-book pair: each agent has at most one resting order across both
/// sides, and the two sides never cross once a submission completes.
class OrderBook {
public:
  std::optional<double> best_bid() const;
  std::optional<double> best_ask() const;

  /// Removes whatever the agent has resting. Returns true if something was removed.
  bool cancel(AgentId agent);

  std::optional<RestingOrder> resting_order(AgentId agent, Side* side = nullptr) const;

  const std::vector<RestingOrder>& bids() const { return bids_; }
  const std::vector<RestingOrder>& asks() const { return asks_; }
  bool empty() const { return bids_.empty() && asks_.empty(); }
  void clear();

private:
  friend MatchOutcome submit_order(OrderBook&, const Order&, std::span<AgentState>);

  std::vector<RestingOrder>& side_book(Side side) { return side == Side::Buy ? bids_ : asks_; }
  // Index of the highest-priority order on a side, or npos.
  std::size_t best_index(Side side) const;
  void insert(Side side, const Order& order);

  std::vector<RestingOrder> bids_;
  std::vector<RestingOrder> asks_;
  std::uint64_t next_sequence_ = 0;
};

struct BestPrices {
  std::optional<double> bid;
  std::optional<double> ask;
};

BestPrices best_prices(const OrderBook& books);

/// Submits one order against the books and settles any resulting trade in
/// `agents` (indexed by agent id).
///
/// The submitter's previous resting order is cancelled first. A buy crosses
/// when its price is at or above the best ask, a sell when at or below the
/// best bid; the trade happens at the resting order's price. Resting
/// counterparties that can no longer settle are purged and matching retries
/// against the next best level.
MatchOutcome submit_order(OrderBook& books, const Order& order, std::span<AgentState> agents);

/// Mean trade price of a round, or `fallback` when nothing traded.
double round_average_price(std::span<const Trade> trades, double fallback);

/// Writes `round,buyer,seller,price,aggressor` rows. Throws std::runtime_error on I/O failure.
void write_ledger_csv(std::span<const Trade> trades, const std::string& path);
std::string ledger_csv(std::span<const Trade> trades);

}  // namespace bsim
