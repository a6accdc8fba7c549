// Copyright (c) 2026 hazpipe contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "hazpipe/geometry.hpp"
#include "hazpipe/image.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hazpipe {

/// The 13 hazmat sign classes, indices stable 0..12. Lookup canonicalizes
/// (lowercase, spaces to hyphens) and resolves known aliases
/// ("flammable gas" -> flammable).
class ClassRegistry {
public:
    static const ClassRegistry& standard();

    int size() const { return static_cast<int>(names_.size()); }
    const std::string& name(int class_id) const;
    std::optional<int> find(std::string_view raw_name) const;

    /// Throws UnknownClass.
    int resolve(std::string_view raw_name) const;

    static std::string canonicalize(std::string_view raw_name);

private:
    ClassRegistry();
    std::vector<std::string> names_;
    std::vector<std::pair<std::string, std::string>> aliases_;
};

struct VocObject {
    std::string class_name;
    BBox box;
    bool difficult = false;
};

struct VocAnnotation {
    std::string filename;
    int width = 0;
    int height = 0;
    int depth = 3;
    std::vector<VocObject> objects;

    bool operator==(const VocAnnotation&) const = default;
};

inline bool operator==(const VocObject& a, const VocObject& b) {
    return a.class_name == b.class_name && a.box == b.box && a.difficult == b.difficult;
}

/// Parses a VOC annotation document. Unknown elements and attributes are
/// ignored; class names must resolve in the registry and boxes must lie
/// within the declared image size.
/// Throws XmlError, UnknownClass, OutOfBoundsBox.
VocAnnotation voc_parse(std::string_view xml_text,
                        const ClassRegistry& registry = ClassRegistry::standard());

/// Canonical VOC XML (stable field order, shortest round-trip numbers) such
/// that voc_parse(voc_write(a)) == a.
std::string voc_write(const VocAnnotation& annotation);

struct SplitItem {
    std::string id;
    int class_id = 0;
};

struct SplitResult {
    std::vector<std::string> train;
    std::vector<std::string> test;
    bool test_empty = false;  // degenerate input: everything went to train
};

/// Deterministic stratified split: per class, seeded shuffle then a
/// ceil(n * fraction) cut to train. Throws EmptySet.
SplitResult split_dataset(std::span<const SplitItem> items, double train_fraction,
                          std::uint64_t seed);

struct AugmentOp {
    enum class Kind : std::uint8_t { HorizontalFlip, Rotate, Brightness };

    Kind kind = Kind::HorizontalFlip;
    double amount = 0.0;      // degrees for Rotate, delta in [-0.2, 0.2] for Brightness
    bool randomized = false;  // sample amount from the op's legal range using the seed

    static AugmentOp hflip() { return {Kind::HorizontalFlip, 0.0, false}; }
    static AugmentOp rotate(double degrees) { return {Kind::Rotate, degrees, false}; }
    static AugmentOp brightness(double delta) { return {Kind::Brightness, delta, false}; }
    static AugmentOp random_rotate() { return {Kind::Rotate, 0.0, true}; }
    static AugmentOp random_brightness() { return {Kind::Brightness, 0.0, true}; }
};

/// Applies ops in order: horizontal flip, rotation within +/-15 degrees about
/// the image center (boxes map to the axis-aligned bounds of their rotated
/// corners, clipped in-bounds), brightness within +/-20%.
std::pair<Frame, VocAnnotation> augment(const Frame& image, const VocAnnotation& annotation,
                                        std::span<const AugmentOp> ops, std::uint64_t seed);

}  // namespace hazpipe
