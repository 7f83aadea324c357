#pragma once

#include <stdexcept>
#include <string>

namespace widthlab {

/// Experiment identifiers; these strings are the config-schema tokens.
enum class ExampleId {
    circle_3_4,
    elliptic_4_2,
    parabolic_4_5,
    parabolic_4_6,
    movdisk_4_10,
    movhole_4_11,
    defhole_4_13,
    curve_4_14,
    varparam_4_17,
    adv_l1_4_20,
    adv_l2_4_22,
    table1_contrast,
};

inline std::string to_string(ExampleId id) {
    switch (id) {
        case ExampleId::circle_3_4: return "circle_3_4";
        case ExampleId::elliptic_4_2: return "elliptic_4_2";
        case ExampleId::parabolic_4_5: return "parabolic_4_5";
        case ExampleId::parabolic_4_6: return "parabolic_4_6";
        case ExampleId::movdisk_4_10: return "movdisk_4_10";
        case ExampleId::movhole_4_11: return "movhole_4_11";
        case ExampleId::defhole_4_13: return "defhole_4_13";
        case ExampleId::curve_4_14: return "curve_4_14";
        case ExampleId::varparam_4_17: return "varparam_4_17";
        case ExampleId::adv_l1_4_20: return "adv_l1_4_20";
        case ExampleId::adv_l2_4_22: return "adv_l2_4_22";
        case ExampleId::table1_contrast: return "table1_contrast";
    }
    throw std::logic_error("to_string: unknown example id");
}

inline ExampleId parse_example_id(const std::string& s) {
    for (ExampleId id :
         {ExampleId::circle_3_4, ExampleId::elliptic_4_2, ExampleId::parabolic_4_5,
          ExampleId::parabolic_4_6, ExampleId::movdisk_4_10, ExampleId::movhole_4_11,
          ExampleId::defhole_4_13, ExampleId::curve_4_14, ExampleId::varparam_4_17,
          ExampleId::adv_l1_4_20, ExampleId::adv_l2_4_22, ExampleId::table1_contrast}) {
        if (to_string(id) == s) return id;
    }
    throw std::invalid_argument("unknown example_id: " + s);
}

}  // namespace widthlab
