// Copyright 2026 The Side Channel Lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "sclab/core/error.h"
#include "sclab/core/rng.h"
#include "sclab/memfilter/bloom.h"
#include "sclab/memfilter/filter.h"
#include "sclab/memfilter/ngram.h"
#include "sclab/memfilter/secret.h"

namespace sclab::memfilter {
namespace {

TokenSeq Chars(std::string_view s) {
  TokenSeq t;
  for (char c : s) t.push_back(static_cast<unsigned char>(c));
  return t;
}

TokenCorpus RandomCorpus(Rng& rng, std::size_t docs, std::size_t len,
                         int alphabet) {
  TokenCorpus c;
  for (std::size_t d = 0; d < docs; ++d) {
    TokenSeq doc(len);
    for (auto& t : doc) t = static_cast<Token>(rng.UniformInt(alphabet));
    c.documents.push_back(doc);
  }
  return c;
}

std::set<TokenSeq> KgramSet(const TokenCorpus& c, std::size_t k) {
  std::set<TokenSeq> s;
  for (const auto& d : c.documents) {
    for (std::size_t i = 0; i + k <= d.size(); ++i) {
      s.emplace(d.begin() + i, d.begin() + i + k);
    }
  }
  return s;
}

TEST(NGramLm, DistributionSumsToOne) {
  Rng rng(5);
  NGramLm lm;
  lm.Train(RandomCorpus(rng, 5, 200, 12));
  for (int trial = 0; trial < 50; ++trial) {
    TokenSeq h(rng.UniformInt(20));
    for (auto& t : h) t = static_cast<Token>(rng.UniformInt(14));
    auto p = lm.NextDistribution(h);
    EXPECT_NEAR(std::accumulate(p.begin(), p.end(), 0.0), 1.0, 1e-12);
  }
}

TEST(NGramLm, GreedyFollowsCorpusAndBreaksTiesLow) {
  NGramLm lm;
  lm.Train(TokenCorpus{{{1, 2, 3}, {7, 8}}});
  const TokenSeq h = {1, 2};
  EXPECT_EQ(lm.Greedy(h), 3);
  // A context never seen backs off; the unigram counts are all 1.
  NGramLm flat({.order = 1, .smoothing = 0.1, .cache_weight = 0});
  flat.Train(TokenCorpus{{{9, 4, 6}}});
  const TokenSeq any = {9};
  EXPECT_EQ(flat.Greedy(any), 4);
  EXPECT_EQ(flat.RankedNext(any), (TokenSeq{4, 6, 9}));
}

TEST(NGramLm, InContextRepetitionCoerces) {
  NGramLm lm;
  lm.Train(TokenCorpus{{{1, 2, 3, 4, 5, 6, 7, 8}}});
  // The corpus says 5 follows 1 2 3 4, the prompt says 9 does.
  const TokenSeq prompt = {1, 2, 3, 4, 9, 1, 2, 3, 4, 9, 1, 2, 3, 4};
  lm.AddToVocabulary(prompt);
  EXPECT_EQ(lm.Greedy(prompt), 9);
}

TEST(SizeBloom, MatchesFormula) {
  const BloomSizing s = SizeBloom(1000, 0.01);
  EXPECT_EQ(s.bits, 9586u);
  EXPECT_EQ(s.hashes, 7u);
}

TEST(BloomFilter, NoFalseNegativesAndBoundedFalsePositives) {
  Rng rng(11);
  const double p = 0.01;
  const std::size_t n = 20000, k = 6;
  const BloomSizing s = SizeBloom(n, p);
  BloomFilter f(s.bits, s.hashes);
  std::set<TokenSeq> in;
  while (in.size() < n) {
    TokenSeq g(k);
    for (auto& t : g) t = static_cast<Token>(rng.UniformInt(1000));
    in.insert(g);
  }
  for (const auto& g : in) f.Insert(g);
  for (const auto& g : in) ASSERT_TRUE(f.Contains(g));
  std::size_t fp = 0, probes = 0;
  while (probes < 100000) {
    TokenSeq g(k);
    for (auto& t : g) t = static_cast<Token>(rng.UniformInt(1000));
    if (in.count(g)) continue;
    ++probes;
    fp += f.Contains(g);
  }
  EXPECT_LE(static_cast<double>(fp) / probes, 2 * p);
}

TEST(BloomFilter, SerializationIsLittleEndianAndRoundTrips) {
  BloomFilter f(10, 2, 3);
  const TokenSeq key = {1, 2, 3};
  f.Insert(key);
  const std::string bytes = f.Serialize();
  ASSERT_EQ(bytes.size(), 8u + 4 + 8 + 4 + 8 + 8 + 8 + 2);
  EXPECT_EQ(bytes.substr(0, 8), "SCBLOOM1");
  EXPECT_EQ(static_cast<unsigned char>(bytes[8]), 3);
  EXPECT_EQ(static_cast<unsigned char>(bytes[12]), 10);
  EXPECT_EQ(bytes[13], 0);
  EXPECT_EQ(static_cast<unsigned char>(bytes[20]), 2);
  EXPECT_EQ(static_cast<unsigned char>(bytes[24]), kBloomSeed1 & 0xff);
  EXPECT_EQ(static_cast<unsigned char>(bytes[40]), 1);
  EXPECT_THROW(f.Insert(TokenSeq{1, 2}), ContractViolation);
  BloomFilter g = BloomFilter::Deserialize(bytes);
  EXPECT_EQ(f, g);
  EXPECT_TRUE(g.Contains(key));
  EXPECT_THROW(BloomFilter::Deserialize("nope"), ContractViolation);
}

TEST(BuildFilter, Contracts) {
  EXPECT_THROW(BuildFilter(TokenCorpus{}, 3, 0.0), ContractViolation);
  EXPECT_THROW(BuildFilter(TokenCorpus{{{1, 2}}}, 1, 0.0), ContractViolation);
  MemorizationFilter f = BuildFilter(TokenCorpus{{{1, 2, 3, 4}}}, 3, 0.0);
  EXPECT_TRUE(f.exact());
  EXPECT_EQ(f.distinct_kgrams(), 2u);
}

TEST(FilteredDecode, OffIsPlainGreedy) {
  Rng rng(3);
  TokenCorpus c = RandomCorpus(rng, 3, 100, 6);
  NGramLm lm;
  lm.Train(c);
  MemorizationFilter f = BuildFilter(c, 4, 0.0, FilterToggle::kOff);
  FilteredLm sys(lm, f);
  TokenSeq prompt = {1, 2, 3};
  TokenSeq out = sys.Decode(prompt, 20);
  TokenSeq h = prompt;
  for (Token t : out) {
    EXPECT_EQ(t, lm.Greedy(h));
    h.push_back(t);
  }
}

TEST(FilteredDecode, TrainingContinuationIsBlocked) {
  const TokenSeq doc = {10, 11, 12, 13, 14, 15, 16, 17};
  TokenCorpus c{{doc}};
  NGramLm lm;
  lm.Train(c);
  const std::size_t k = 4;
  MemorizationFilter f = BuildFilter(c, k, 0.0);
  FilteredLm sys(lm, f);
  std::span<const Token> prefix(doc.data(), k - 1);
  TokenSeq off = sys.Decode(prefix, 5, false);
  EXPECT_EQ(off, TokenSeq(doc.begin() + (k - 1), doc.begin() + (k + 4)));
  TokenSeq on = sys.Decode(prefix, 5, true);
  EXPECT_NE(on[0], off[0]);
}

TEST(FilteredDecode, ShortPromptIsUnfilteredUntilKgramForms) {
  const TokenSeq doc = {10, 11, 12, 13, 14, 15};
  TokenCorpus c{{doc}};
  NGramLm lm;
  lm.Train(c);
  MemorizationFilter f = BuildFilter(c, 4, 0.0);
  FilteredLm sys(lm, f);
  // One prompt token: emissions 1 and 2 have no full window yet.
  const TokenSeq prompt = {10};
  TokenSeq on = sys.Decode(prompt, 3, true);
  EXPECT_EQ(on[0], 11);
  EXPECT_EQ(on[1], 12);
  EXPECT_NE(on[2], 13);
}

// Every emitted token closes a window that is absent from the filter and from
// the corpus, for every prompt position of several corpora.
TEST(FilteredDecodeProperty, NeverEmitsTrainingKgram) {
  Rng rng(21);
  for (int trial = 0; trial < 4; ++trial) {
    const std::size_t k = 3 + rng.UniformInt(4);
    TokenCorpus c = RandomCorpus(rng, 4, 2000, 4 + trial);
    const auto truth = KgramSet(c, k);
    NGramLm lm;
    lm.Train(c);
    for (double fp : {0.0, 0.001}) {
      MemorizationFilter f = BuildFilter(c, k, fp);
      FilteredLm sys(lm, f);
      for (const auto& doc : c.documents) {
        for (std::size_t i = k - 1; i < doc.size(); i += 7) {
          std::span<const Token> prompt(doc.data() + (i - (k - 1)), k - 1);
          TokenSeq out = sys.Decode(prompt, 6);
          TokenSeq all(prompt.begin(), prompt.end());
          for (Token t : out) {
            if (t == kEndOfOutput) break;
            all.push_back(t);
            TokenSeq w(all.end() - k, all.end());
            ASSERT_FALSE(f.Contains(w));
            ASSERT_EQ(truth.count(w), 0u);
          }
        }
      }
    }
  }
}

TEST(FilteredDecode, AllBlockedEmitsSentinel) {
  // Every 2-gram over {1, 2} is in the corpus.
  TokenCorpus c{{{1, 1, 2, 2, 1}}};
  NGramLm lm;
  lm.Train(c);
  MemorizationFilter f = BuildFilter(c, 2, 0.0);
  FilteredLm sys(lm, f);
  const TokenSeq prompt = {1};
  EXPECT_EQ(sys.Decode(prompt, 3), (TokenSeq{kEndOfOutput}));
}

class ToggleFixture : public ::testing::Test {
 protected:
  ToggleFixture()
      : lm_({.order = 2, .smoothing = 0.1, .cache_weight = 0.9}),
        corpus_{{{1, 2, 3}, {3, 4, 5}, {20, 21, 22, 23, 24, 25}}} {
    lm_.Train(corpus_);
    lm_.AddToVocabulary(TokenSeq{9});
    filter_ = BuildFilter(corpus_, 4, 0.0);
  }
  NGramLm lm_;
  TokenCorpus corpus_;
  MemorizationFilter filter_;
};

TEST_F(ToggleFixture, MemberNonmemberInconclusive) {
  FilteredLm sys(lm_, filter_);
  EXPECT_EQ(MiToggleable(sys, TokenSeq{20, 21, 22, 23, 24, 25}).verdict,
            MiVerdict::kMember);
  // Greedy from 1 2 3 goes on 4 5, but no 4-gram of it was trained on.
  EXPECT_EQ(MiToggleable(sys, TokenSeq{1, 2, 3, 4, 5}).verdict,
            MiVerdict::kNonmember);
  EXPECT_EQ(MiToggleable(sys, TokenSeq{1, 2, 3, 9, 9}).verdict,
            MiVerdict::kInconclusive);
  filter_.set_toggle(FilterToggle::kPermanent);
  EXPECT_THROW(MiToggleable(sys, TokenSeq{1, 2, 3}), ContractViolation);
}

TEST_F(ToggleFixture, PermanentFilterRepetition) {
  filter_.set_toggle(FilterToggle::kPermanent);
  FilteredLm sys(lm_, filter_);
  const TokenSeq p = {20, 21, 22}, s = {23};
  EXPECT_EQ(MiPermanent(sys, p, s).verdict, MiVerdict::kMember);
  const TokenSeq q = {1, 2, 3}, absent = {9};
  PermanentResult r = MiPermanent(sys, q, absent);
  EXPECT_EQ(r.verdict, MiVerdict::kNonmember);
  EXPECT_EQ(r.output, absent);
  EXPECT_THROW(MiPermanent(sys, q, absent, 1), ContractViolation);
}

TEST(MiToggleableProperty, NoFalseNegatives) {
  Rng rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    TokenCorpus c = RandomCorpus(rng, 6, 40, 30);
    NGramLm lm;
    lm.Train(c);
    MemorizationFilter f = BuildFilter(c, 5, 0.0);
    FilteredLm sys(lm, f);
    for (const auto& doc : c.documents) {
      const std::size_t start = rng.UniformInt(doc.size() - 12);
      std::span<const Token> target(doc.data() + start, 12);
      EXPECT_NE(MiToggleable(sys, target).verdict, MiVerdict::kNonmember);
    }
  }
}

TEST(BuildPrior, UniformBytesGiveNearUniformPrior) {
  Rng rng(4);
  std::string text(200000, '\0');
  for (auto& c : text) c = static_cast<char>('a' + rng.UniformInt(16));
  TokenPrior p = BuildPrior(text, tokenizer::Vocabulary());
  ASSERT_EQ(p.tokens.size(), 16u);
  // Chi-square with 15 degrees of freedom; 37.7 is the 0.999 quantile.
  double chi2 = 0;
  const double expected = text.size() / 16.0;
  for (double f : p.freq) {
    const double o = f * text.size();
    chi2 += (o - expected) * (o - expected) / expected;
  }
  EXPECT_LT(chi2, 37.7);
  EXPECT_NEAR(std::accumulate(p.freq.begin(), p.freq.end(), 0.0), 1.0, 1e-12);
}

TEST(BuildPrior, MergedTokenRarerThanItsByte) {
  tokenizer::Vocabulary v;
  v.AddMerge('Q', 'Q');
  Rng rng(6);
  std::string text = RandomBase64(rng, 100000);
  TokenPrior p = BuildPrior(text, v);
  EXPECT_LT(p.Frequency(256), p.Frequency('Q'));
  EXPECT_GT(p.Frequency(256), 0.0);
  EXPECT_THROW(BuildPrior("", v), ContractViolation);
  const TokenSeq foreign = {9999};
  EXPECT_THROW(PriorOrder(foreign, p), ContractViolation);
}

TEST(ExtractSecret, PlantedKeyIsRecovered) {
  TokenCorpus c{{Chars("the weather is fine today"), Chars("KEY=abc#"),
                 Chars("another line of text")}};
  NGramLm lm;
  lm.Train(c);
  TokenSeq alphabet;
  for (char ch = 'a'; ch <= 'z'; ++ch) alphabet.push_back(ch);
  alphabet.push_back('#');
  alphabet.push_back(' ');
  lm.AddToVocabulary(alphabet);
  MemorizationFilter f = BuildFilter(c, 5, 0.0, FilterToggle::kPermanent);
  FilteredLm sys(lm, f);
  TokenPrior prior;
  for (Token t : alphabet) {
    prior.tokens.push_back(t);
    prior.freq.push_back(1.0 / alphabet.size());
  }
  SecretExtraction r =
      ExtractSecret(sys, Chars("KEY="), alphabet, prior, '#');
  EXPECT_TRUE(r.complete);
  EXPECT_EQ(r.tokens, Chars("abc#"));
  EXPECT_GT(r.queries, 0u);
  EXPECT_THROW(ExtractSecret(sys, Chars("KE"), alphabet, prior, '#'),
               ContractViolation);
}

TEST(ExtractSecretProperty, ExactFilterRecoversEverySecret) {
  Rng rng(31);
  const std::size_t k = 6;
  TokenSeq alphabet;
  for (Token t = 100; t < 140; ++t) alphabet.push_back(t);
  const Token term = 99;
  TokenPrior prior;
  for (Token t : alphabet) {
    prior.tokens.push_back(t);
    prior.freq.push_back(1.0 / alphabet.size());
  }
  TokenCorpus c = RandomCorpus(rng, 10, 300, 90);
  std::vector<TokenSeq> prefixes, secrets;
  for (int s = 0; s < 8; ++s) {
    // Distinct prefixes; shared ones would let secrets alias in k-1 windows.
    TokenSeq prefix;
    for (int j = 0; j < 5; ++j) prefix.push_back(200 + 5 * s + j);
    TokenSeq secret(20);
    for (auto& t : secret) t = alphabet[rng.UniformInt(alphabet.size())];
    TokenSeq doc = prefix;
    doc.insert(doc.end(), secret.begin(), secret.end());
    doc.push_back(term);
    c.documents.push_back(doc);
    prefixes.push_back(prefix);
    secret.push_back(term);
    secrets.push_back(secret);
  }
  NGramLm lm;
  lm.Train(c);
  lm.AddToVocabulary(alphabet);
  MemorizationFilter f = BuildFilter(c, k, 0.0, FilterToggle::kPermanent);
  FilteredLm sys(lm, f);
  for (std::size_t s = 0; s < secrets.size(); ++s) {
    SecretExtraction r = ExtractSecret(sys, prefixes[s], alphabet, prior, term);
    EXPECT_TRUE(r.complete) << "secret " << s;
    EXPECT_EQ(r.tokens, secrets[s]) << "secret " << s;
  }
}

TEST(ExtractSecret, BudgetIsReported) {
  TokenCorpus c{{Chars("KEY=abc#")}};
  NGramLm lm;
  lm.Train(c);
  const TokenSeq alphabet = Chars("abc#");
  MemorizationFilter f = BuildFilter(c, 5, 0.0, FilterToggle::kPermanent);
  FilteredLm sys(lm, f);
  TokenPrior prior{alphabet, {0.25, 0.25, 0.25, 0.25}};
  SecretExtraction r = ExtractSecret(sys, Chars("KEY="), alphabet, prior, '#',
                                     {.max_queries = 2});
  EXPECT_TRUE(r.budget_exhausted);
  EXPECT_FALSE(r.complete);
  EXPECT_EQ(r.queries, 2u);
}

}  // namespace
}  // namespace sclab::memfilter
