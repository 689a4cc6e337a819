#pragma once

#include <random>

#include "votegraph/election.hpp"

// Four-candidate WMG used throughout the docs and tests: candidates named
// "1".."4" (ids 0..3), margins d(3,2)=8, d(2,1)=8, d(4,1)=6, d(1,3)=6,
// d(4,2)=4, d(3,4)=2 in display names. Schulze elects "4", ranked pairs
// with the default tie-break elects "3".
inline votegraph::Wmg fig1_wmg() {
  votegraph::Wmg w(4);
  auto put = [&](int a, int b, long long v) {
    w.at(a, b) = v;
    w.at(b, a) = -v;
  };
  put(2, 1, 8);  // 3 over 2
  put(1, 0, 8);  // 2 over 1
  put(3, 0, 6);  // 4 over 1
  put(0, 2, 6);  // 1 over 3
  put(3, 1, 4);  // 4 over 2
  put(2, 3, 2);  // 3 over 4
  return w;
}

inline votegraph::Election fig1_election() {
  return votegraph::mcgarvey_synthesize(fig1_wmg());
}

inline votegraph::Wmg random_wmg(std::mt19937_64& rng, int j, long long max_abs) {
  votegraph::Wmg w(j);
  std::uniform_int_distribution<long long> mag(0, max_abs / 2);
  std::uniform_int_distribution<int> parity(0, 1);
  const long long odd = parity(rng);
  for (int a = 0; a < j; ++a)
    for (int b = a + 1; b < j; ++b) {
      long long v = 2 * mag(rng) + odd;
      if (v > max_abs) v -= 2;
      if (parity(rng)) v = -v;
      w.at(a, b) = v;
      w.at(b, a) = -v;
    }
  return w;
}

inline votegraph::Election random_election(std::mt19937_64& rng, int j, int voters,
                                           long long max_weight = 1) {
  votegraph::Election e;
  for (int c = 0; c < j; ++c) e.candidates.push_back(std::to_string(c + 1));
  std::vector<int> order(j);
  for (int c = 0; c < j; ++c) order[c] = c;
  std::uniform_int_distribution<long long> wdist(1, max_weight);
  for (int v = 0; v < voters; ++v) {
    std::shuffle(order.begin(), order.end(), rng);
    votegraph::Ballot b;
    b.order = order;
    b.weight = wdist(rng);
    e.ballots.push_back(std::move(b));
  }
  return e;
}
