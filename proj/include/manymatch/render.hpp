#pragma once

#include <string>

#include "manymatch/prism.hpp"
#include "manymatch/solver.hpp"

namespace manymatch {

struct RenderOptions {
    int size = 800;  // canvas width and height in pixels
    const EdgeCover* cover = nullptr;
    const Overlay* overlay = nullptr;
};

// Red squares, blue disks, cover edges drawn thick. Output depends only on
// the inputs.
std::string render_svg(const Instance& inst, const RenderOptions& opt);

}  // namespace manymatch
