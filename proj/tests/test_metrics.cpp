#include <doctest.h>

#include "bht/probe_stats.hpp"
#include "bht/sector_model.hpp"

using namespace bht;

TEST_SUITE_BEGIN("metrics");

TEST_CASE("probe accounting") {
  probe_stats s{op_kind::insert};
  s.begin_op();
  record_probe(s);
  CHECK(s.mean_probes() == 1.0);

  probe_stats t{op_kind::find};
  for (std::uint64_t probes : {1, 2, 3}) {
    t.begin_op();
    record_probe(t, probes);
  }
  CHECK(t.mean_probes() == 2.0);

  probe_stats merged{op_kind::find};
  merged.merge(s);
  merged.merge(t);
  CHECK(merged.total_probes == s.total_probes + t.total_probes);
  CHECK(merged.total_ops == s.total_ops + t.total_ops);
  CHECK(probe_stats{}.mean_probes() == 0.0);
}

TEST_CASE("bucket sector counts") {
  CHECK(sector_model::bucket_sectors(16) == 4);
  CHECK(sector_model::bucket_sectors(32) == 8);
  CHECK(sector_model::bucket_sectors(1) == 1);
  CHECK(sector_model::bucket_sectors(8) == 2);
}

TEST_CASE("predicted sectors per key") {
  CHECK(predict_sectors(table_kind::bcht, 16, 1.0, op_kind::find) == 4.0);
  CHECK(predict_sectors(table_kind::bcht, 16, 3.0, op_kind::find) == 12.0);
  CHECK(predict_sectors(table_kind::bcht, 16, 1.0, op_kind::insert) == 5.0);
  // single-slot tables move two sectors per probe (64-byte DRAM-L2 grain)
  CHECK(predict_sectors(table_kind::one_cht, 1, 1.0, op_kind::find) == 2.0);
  CHECK(predict_sectors(table_kind::one_cht, 1, 2.75, op_kind::insert) == doctest::Approx(6.5));
}

TEST_CASE("model is monotone in probes and bucket size") {
  double prev = 0.0;
  for (double probes : {1.0, 1.5, 2.0, 2.5, 3.0}) {
    double s = predict_sectors(table_kind::bcht, 16, probes, op_kind::find);
    CHECK(s > prev);
    prev = s;
  }
  prev = 0.0;
  for (std::uint32_t b : {4u, 8u, 16u, 32u}) {
    double s = predict_sectors(table_kind::bcht, b, 2.0, op_kind::insert);
    CHECK(s >= prev);
    prev = s;
  }
}

TEST_CASE("two-choice insertion pays one bucket read plus the writeback over a one-probe find") {
  double insert = predict_sectors(table_kind::bp2ht, 16, 2.0, op_kind::insert);
  double best_find = predict_sectors(table_kind::bp2ht, 16, 1.0, op_kind::find);
  CHECK(insert - best_find == sector_model::bucket_sectors(16) + 1);
}

TEST_SUITE_END();
