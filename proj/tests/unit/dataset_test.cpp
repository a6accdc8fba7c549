// Copyright (c) 2026 hazpipe contributors
// SPDX-License-Identifier: Apache-2.0
#include "hazpipe/dataset.hpp"

#include "hazpipe/errors.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <set>

using namespace hazpipe;

TEST_CASE("registry holds the 13 classes with stable indices") {
    const auto& reg = ClassRegistry::standard();
    CHECK(reg.size() == 13);
    CHECK(reg.name(0) == "poison");
    CHECK(reg.name(2) == "flammable");
    CHECK(reg.name(12) == "infectious-substance");
    CHECK(reg.resolve("poison") == 0);
    CHECK(reg.resolve("Poison") == 0);
    CHECK(reg.resolve("Flammable Gas") == 2);
    CHECK(reg.resolve("flammable-gas") == 2);
    CHECK(reg.resolve("Non-flammable Gas") == 6);
    CHECK(reg.resolve("Spontaneously Combustible") == 11);
    CHECK_THROWS_AS(reg.resolve("banana"), UnknownClass);
}

TEST_CASE("voc_parse reads a minimal annotation") {
    const std::string xml = R"(<?xml version="1.0"?>
<annotation verified="yes">
  <folder>ignored</folder>
  <filename>scene_01.jpg</filename>
  <size><width>640</width><height>480</height><depth>3</depth></size>
  <object>
    <name>poison</name>
    <pose>Unspecified</pose>
    <difficult>0</difficult>
    <bndbox><xmin>10</xmin><ymin>20</ymin><xmax>110</xmax><ymax>140</ymax></bndbox>
  </object>
</annotation>)";
    const VocAnnotation ann = voc_parse(xml);
    CHECK(ann.filename == "scene_01.jpg");
    CHECK(ann.width == 640);
    CHECK(ann.height == 480);
    REQUIRE(ann.objects.size() == 1);
    CHECK(ann.objects[0].class_name == "poison");
    CHECK(ann.objects[0].box == BBox{10, 20, 110, 140});
    CHECK_FALSE(ann.objects[0].difficult);
    CHECK(ClassRegistry::standard().resolve(ann.objects[0].class_name) == 0);
}

TEST_CASE("voc_parse rejects unknown classes, bad boxes, and broken XML") {
    const std::string unknown = R"(<annotation><filename>x</filename>
<size><width>100</width><height>100</height></size>
<object><name>banana</name><bndbox><xmin>1</xmin><ymin>1</ymin><xmax>2</xmax><ymax>2</ymax></bndbox></object>
</annotation>)";
    CHECK_THROWS_AS(voc_parse(unknown), UnknownClass);

    const std::string out_of_bounds = R"(<annotation><filename>x</filename>
<size><width>100</width><height>100</height></size>
<object><name>poison</name><bndbox><xmin>50</xmin><ymin>1</ymin><xmax>130</xmax><ymax>2</ymax></bndbox></object>
</annotation>)";
    CHECK_THROWS_AS(voc_parse(out_of_bounds), OutOfBoundsBox);

    const std::string inverted = R"(<annotation><filename>x</filename>
<size><width>100</width><height>100</height></size>
<object><name>poison</name><bndbox><xmin>50</xmin><ymin>10</ymin><xmax>20</xmax><ymax>20</ymax></bndbox></object>
</annotation>)";
    CHECK_THROWS_AS(voc_parse(inverted), OutOfBoundsBox);

    CHECK_THROWS_AS(voc_parse("<annotation><filename>x</filename>"), XmlError);
    CHECK_THROWS_AS(voc_parse("<wrong/>"), XmlError);
    CHECK_THROWS_AS(voc_parse("<annotation><filename>&bogus;</filename></annotation>"),
                    XmlError);
}

TEST_CASE("voc_write emits parseable canonical XML") {
    VocAnnotation empty;
    empty.filename = "no_objects.png";
    empty.width = 32;
    empty.height = 16;
    const VocAnnotation round = voc_parse(voc_write(empty));
    CHECK(round == empty);
    CHECK(round.objects.empty());

    VocAnnotation two;
    two.filename = "two.png";
    two.width = 200;
    two.height = 100;
    two.objects.push_back(VocObject{"oxygen", BBox{1, 2, 30, 40}, true});
    two.objects.push_back(VocObject{"dangerous", BBox{50.25, 6.5, 120, 90}, false});
    const VocAnnotation parsed = voc_parse(voc_write(two));
    REQUIRE(parsed.objects.size() == 2);
    CHECK(parsed.objects[0].class_name == "oxygen");  // input order preserved
    CHECK(parsed.objects[1].class_name == "dangerous");
    CHECK(parsed == two);
}

TEST_CASE("voc round-trip is field-exact on randomized annotations") {
    std::mt19937_64 rng(31337);
    const auto& reg = ClassRegistry::standard();
    for (int instance = 0; instance < 60; ++instance) {
        VocAnnotation ann;
        ann.filename = "img & <" + std::to_string(rng() % 10000) + ">'\".png";
        ann.width = 100 + static_cast<int>(testutil::uindex(rng, 2000));
        ann.height = 100 + static_cast<int>(testutil::uindex(rng, 2000));
        ann.depth = rng() % 2 == 0 ? 3 : 1;
        const std::size_t objects = testutil::uindex(rng, 6);
        for (std::size_t i = 0; i < objects; ++i) {
            VocObject obj;
            obj.class_name = reg.name(static_cast<int>(testutil::uindex(rng, 13)));
            const double x0 = testutil::urand(rng, 0, ann.width - 2);
            const double y0 = testutil::urand(rng, 0, ann.height - 2);
            obj.box = BBox{x0, y0, x0 + testutil::urand(rng, 0.5, ann.width - x0),
                           y0 + testutil::urand(rng, 0.5, ann.height - y0)};
            obj.difficult = rng() % 4 == 0;
            ann.objects.push_back(obj);
        }
        const VocAnnotation round = voc_parse(voc_write(ann));
        CHECK(round == ann);
    }
}

TEST_CASE("split_dataset honors the fraction per class") {
    std::vector<SplitItem> ten;
    for (int i = 0; i < 10; ++i) ten.push_back({"item" + std::to_string(i), 0});
    const SplitResult split = split_dataset(ten, 0.8, 7);
    CHECK(split.train.size() == 8);
    CHECK(split.test.size() == 2);
    CHECK_FALSE(split.test_empty);

    const SplitResult single = split_dataset(std::vector<SplitItem>{{"only", 3}}, 0.8, 7);
    CHECK(single.train.size() == 1);
    CHECK(single.test.empty());
    CHECK(single.test_empty);

    CHECK_THROWS_AS(split_dataset({}, 0.8, 7), EmptySet);
    CHECK_THROWS_AS(split_dataset(ten, 0.0, 7), std::invalid_argument);
    CHECK_THROWS_AS(split_dataset(ten, 1.0, 7), std::invalid_argument);
}

TEST_CASE("split_dataset is stratified, partitioning, and seed-deterministic") {
    std::vector<SplitItem> items;
    for (int c = 0; c < 13; ++c) {
        for (int i = 0; i < 100; ++i) {
            items.push_back({"c" + std::to_string(c) + "_" + std::to_string(i), c});
        }
    }
    const SplitResult a = split_dataset(items, 0.8, 42);
    const SplitResult b = split_dataset(items, 0.8, 42);
    CHECK(a.train == b.train);
    CHECK(a.test == b.test);

    CHECK(a.train.size() == 13 * 80);
    CHECK(a.test.size() == 13 * 20);
    for (int c = 0; c < 13; ++c) {
        const std::string prefix = "c" + std::to_string(c) + "_";
        const auto count_prefix = [&](const std::vector<std::string>& ids) {
            return std::count_if(ids.begin(), ids.end(), [&](const std::string& id) {
                return id.rfind(prefix, 0) == 0;
            });
        };
        CHECK(count_prefix(a.train) == 80);
        CHECK(count_prefix(a.test) == 20);
    }

    // partition: no loss, no duplication
    std::set<std::string> all;
    for (const auto& id : a.train) all.insert(id);
    for (const auto& id : a.test) all.insert(id);
    CHECK(all.size() == items.size());

    const SplitResult other_seed = split_dataset(items, 0.8, 43);
    CHECK(other_seed.train != a.train);  // overwhelmingly likely for 1300 items
}

TEST_CASE("augment: horizontal flip mirrors boxes") {
    Frame frame;
    frame.width = 100;
    frame.height = 60;
    frame.pixels.assign(3 * 100 * 60, 0);
    frame.rgb(10, 5)[0] = 255;

    VocAnnotation ann;
    ann.filename = "f.png";
    ann.width = 100;
    ann.height = 60;
    ann.objects.push_back(VocObject{"poison", BBox{10, 20, 30, 40}, false});

    const auto ops = std::vector<AugmentOp>{AugmentOp::hflip()};
    const auto [flipped, flipped_ann] = augment(frame, ann, ops, 1);
    CHECK(flipped_ann.objects[0].box == BBox{70, 20, 90, 40});
    CHECK(flipped.rgb(89, 5)[0] == 255);
}

TEST_CASE("augment: identity op list and zero rotation change nothing") {
    const auto scene = testutil::make_diamond_scene(64, 48, 32, 24, 16, 12);
    VocAnnotation ann;
    ann.filename = "d.png";
    ann.width = 64;
    ann.height = 48;
    ann.objects.push_back(VocObject{"oxygen", scene.box, false});

    const auto [same, same_ann] = augment(scene.frame, ann, {}, 9);
    CHECK(same.pixels == scene.frame.pixels);
    CHECK(same_ann == ann);

    const auto ops = std::vector<AugmentOp>{AugmentOp::rotate(0.0)};
    const auto [rot, rot_ann] = augment(scene.frame, ann, ops, 9);
    CHECK(rot.pixels == scene.frame.pixels);
    CHECK(rot_ann == ann);
}

TEST_CASE("augment: rotated and brightened outputs stay in bounds") {
    const auto scene = testutil::make_diamond_scene(80, 60, 40, 30, 24, 18);
    VocAnnotation ann;
    ann.filename = "d.png";
    ann.width = 80;
    ann.height = 60;
    ann.objects.push_back(VocObject{"oxygen", scene.box, false});

    std::mt19937_64 rng(5);
    for (int i = 0; i < 20; ++i) {
        const auto ops = std::vector<AugmentOp>{AugmentOp::random_rotate(),
                                                AugmentOp::random_brightness()};
        const auto [out, out_ann] = augment(scene.frame, ann, ops, rng());
        for (const auto& obj : out_ann.objects) {
            CHECK(obj.box.valid());
            CHECK(obj.box.x_min >= 0);
            CHECK(obj.box.y_min >= 0);
            CHECK(obj.box.x_max <= 80);
            CHECK(obj.box.y_max <= 60);
        }
        CHECK_NOTHROW(voc_parse(voc_write(out_ann)));
    }
    CHECK_THROWS_AS(augment(scene.frame, ann, std::vector<AugmentOp>{AugmentOp::rotate(30.0)}, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        augment(scene.frame, ann, std::vector<AugmentOp>{AugmentOp::brightness(0.5)}, 1),
        std::invalid_argument);
}
