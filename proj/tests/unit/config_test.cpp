// SPDX-License-Identifier: MIT
#include <doctest.h>

#include <cstdlib>

#include "openable/Config.h"
#include "openable/Error.h"
#include "openable/Pipeline.h"

using namespace openable;

TEST_CASE("config round trip") {
    PipelineConfig c;
    c.source = SegmentationSource::Views;
    c.merge_iou = 0.7;
    c.seed = 99;
    c.complete_interior = false;
    const PipelineConfig back = PipelineConfig::from_json(c.to_json());
    CHECK(back.to_json() == c.to_json());
    CHECK(back.source == SegmentationSource::Views);
}

TEST_CASE("config validation") {
    CHECK_THROWS_AS(PipelineConfig::from_json({{"unknown_key", 1}}), Error);
    CHECK_THROWS_AS(PipelineConfig::from_json({{"fps_points", -5}}), Error);
    CHECK_THROWS_AS(PipelineConfig::from_json({{"merge_iou", "high"}}), Error);
    CHECK_THROWS_AS(PipelineConfig::from_json({{"source", "magic"}}), Error);
    PipelineConfig c;
    c.confidence_threshold = 1.5;
    CHECK_THROWS_AS(c.validate(), Error);
    c = {};
    c.knn_k = 0;
    CHECK_THROWS_AS(c.validate(), Error);
    c = {};
    c.fps_points = c.sample_points + 1;
    CHECK_THROWS_AS(c.validate(), Error);
    const PipelineConfig partial = PipelineConfig::from_json({{"seed", 5}});
    CHECK(partial.seed == 5);
    CHECK(partial.confidence_threshold == 0.9);
}

TEST_CASE("segmentation source names") {
    for (auto s : {SegmentationSource::GroundTruth, SegmentationSource::PointCloud, SegmentationSource::Views}) {
        CHECK(parse_segmentation_source(to_string(s)) == s);
    }
    CHECK_THROWS_AS(parse_segmentation_source("nope"), Error);
}

TEST_CASE("worker count from the environment") {
    ::unsetenv("OPENABLE_WORKERS");
    CHECK(workers_from_env(3) == 3);
    ::setenv("OPENABLE_WORKERS", "2", 1);
    CHECK(workers_from_env(1) == 2);
    ::setenv("OPENABLE_WORKERS", "zero", 1);
    CHECK_THROWS_AS(workers_from_env(1), Error);
    ::unsetenv("OPENABLE_WORKERS");
}
