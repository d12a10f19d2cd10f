#include "bubblesim/market.hpp"

#include <algorithm>
#include <stdexcept>

#include "format.hpp"

namespace bsim {

const char* to_string(Side side) { return side == Side::Buy ? "buy" : "sell"; }

const char* to_string(RejectReason reason) {
  switch (reason) {
    case RejectReason::InfeasibleAggressor: return "infeasible_aggressor";
    case RejectReason::InvalidOrder: return "invalid_order";
  }
  return "unknown";
}

namespace {

constexpr std::size_t npos = static_cast<std::size_t>(-1);

// True when `a` has priority over `b` on the given side.
bool better(Side side, const RestingOrder& a, const RestingOrder& b) {
  if (a.price != b.price) return side == Side::Buy ? a.price > b.price : a.price < b.price;
  return a.sequence < b.sequence;
}

bool crosses(Side incoming, double incoming_price, double resting_price) {
  return incoming == Side::Buy ? incoming_price >= resting_price : incoming_price <= resting_price;
}

}  // namespace

std::size_t OrderBook::best_index(Side side) const {
  const auto& book = side == Side::Buy ? bids_ : asks_;
  std::size_t best = npos;
  for (std::size_t i = 0; i < book.size(); ++i) {
    if (best == npos || better(side, book[i], book[best])) best = i;
  }
  return best;
}

std::optional<double> OrderBook::best_bid() const {
  const auto i = best_index(Side::Buy);
  if (i == npos) return std::nullopt;
  return bids_[i].price;
}

std::optional<double> OrderBook::best_ask() const {
  const auto i = best_index(Side::Sell);
  if (i == npos) return std::nullopt;
  return asks_[i].price;
}

bool OrderBook::cancel(AgentId agent) {
  auto owned = [agent](const RestingOrder& o) { return o.agent_id == agent; };
  const auto removed = std::erase_if(bids_, owned) + std::erase_if(asks_, owned);
  return removed > 0;
}

std::optional<RestingOrder> OrderBook::resting_order(AgentId agent, Side* side) const {
  for (const auto& o : bids_) {
    if (o.agent_id == agent) {
      if (side) *side = Side::Buy;
      return o;
    }
  }
  for (const auto& o : asks_) {
    if (o.agent_id == agent) {
      if (side) *side = Side::Sell;
      return o;
    }
  }
  return std::nullopt;
}

void OrderBook::clear() {
  bids_.clear();
  asks_.clear();
}

void OrderBook::insert(Side side, const Order& order) {
  side_book(side).push_back(RestingOrder{order.agent_id, order.price, next_sequence_++, order.round});
}

BestPrices best_prices(const OrderBook& books) { return {books.best_bid(), books.best_ask()}; }

MatchOutcome submit_order(OrderBook& books, const Order& order, std::span<AgentState> agents) {
  if (!(order.price > 0.0) || order.agent_id >= agents.size()) return Rejected{RejectReason::InvalidOrder};

  books.cancel(order.agent_id);

  auto& self = agents[order.agent_id];
  const bool feasible = order.side == Side::Buy ? self.cash >= order.price : self.shares >= 1;
  if (!feasible) return Rejected{RejectReason::InfeasibleAggressor};

  const Side opposite = order.side == Side::Buy ? Side::Sell : Side::Buy;
  auto& book = books.side_book(opposite);
  for (;;) {
    const auto i = books.best_index(opposite);
    if (i == npos || !crosses(order.side, order.price, book[i].price)) break;

    const RestingOrder resting = book[i];
    auto& other = agents[resting.agent_id];
    const bool counterparty_ok = opposite == Side::Sell ? other.shares >= 1 : other.cash >= resting.price;
    book.erase(book.begin() + static_cast<std::ptrdiff_t>(i));
    if (!counterparty_ok) continue;

    Trade trade;
    trade.price = resting.price;
    trade.round = order.round;
    trade.aggressor_side = order.side;
    trade.buyer_id = order.side == Side::Buy ? order.agent_id : resting.agent_id;
    trade.seller_id = order.side == Side::Buy ? resting.agent_id : order.agent_id;

    auto& buyer = agents[trade.buyer_id];
    auto& seller = agents[trade.seller_id];
    buyer.cash -= trade.price;
    buyer.shares += 1;
    seller.cash += trade.price;
    seller.shares -= 1;
    return Executed{trade};
  }

  books.insert(order.side, order);
  return Rested{};
}

double round_average_price(std::span<const Trade> trades, double fallback) {
  if (trades.empty()) return fallback;
  double sum = 0.0;
  for (const auto& t : trades) sum += t.price;
  return sum / static_cast<double>(trades.size());
}

std::string ledger_csv(std::span<const Trade> trades) {
  std::string out = "round,buyer,seller,price,aggressor\n";
  for (const auto& t : trades) {
    out += std::to_string(t.round);
    out += ',';
    out += std::to_string(t.buyer_id);
    out += ',';
    out += std::to_string(t.seller_id);
    out += ',';
    out += detail::format_double(t.price);
    out += ',';
    out += to_string(t.aggressor_side);
    out += '\n';
  }
  return out;
}

void write_ledger_csv(std::span<const Trade> trades, const std::string& path) {
  detail::write_text_file(path, ledger_csv(trades));
}

}  // namespace bsim
