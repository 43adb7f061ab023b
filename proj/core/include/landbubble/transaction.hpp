#pragma once

#include <string>

#include "landbubble/date.hpp"

namespace landbubble {

/// One LAND sale expressed in USD.
struct Transaction {
  Date date;
  double usd_price = 0.0;
  int num_plots = 1;
  bool paid_in_weth = false;
  std::string native_currency;
  double native_price = 0.0;
  std::string tx_id;
};

}  // namespace landbubble
