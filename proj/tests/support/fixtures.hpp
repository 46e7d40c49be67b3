#pragma once

#include <random>
#include <string>
#include <vector>

#include "lexbias/embedding.hpp"
#include "lexbias/weat.hpp"
#include "oracles.hpp"

namespace fixture {

/// Random WEAT fixture: named Gaussian vectors and the matching word sets.
struct WeatFixture {
  lexbias::embedding::EmbeddingSet emb;
  lexbias::weat::WordSets sets;
  std::vector<oracle::Vec> x, y, a, b;  // the same vectors in double precision
};

inline WeatFixture random_weat(std::mt19937_64& rng, std::size_t nx, std::size_t ny, std::size_t na,
                               std::size_t nb, std::size_t dim) {
  std::normal_distribution<float> g(0.0f, 1.0f);
  WeatFixture f;
  std::vector<std::string> terms;
  std::vector<float> data;
  auto make = [&](const std::string& prefix, std::size_t n, std::vector<std::string>& names,
                  std::vector<oracle::Vec>& vecs) {
    for (std::size_t i = 0; i < n; ++i) {
      names.push_back(prefix + std::to_string(i));
      terms.push_back(names.back());
      oracle::Vec v(dim);
      for (auto& c : v) {
        const float s = g(rng);
        data.push_back(s);
        c = s;
      }
      vecs.push_back(v);
    }
  };
  make("x", nx, f.sets.x, f.x);
  make("y", ny, f.sets.y, f.y);
  make("a", na, f.sets.a, f.a);
  make("b", nb, f.sets.b, f.b);
  f.emb = lexbias::embedding::EmbeddingSet(terms, dim, data);
  return f;
}

}  // namespace fixture
