// Prints encoder-decoder vs decoder-only parameter and FLOP ratios for the
// base LM geometry at several stack depths.
#include <fmt/format.h>

#include "effcost/archlib.hpp"
#include "effcost/indicators.hpp"

int main() {
  using namespace effcost;
  fmt::print("{:>3}  {:>14}  {:>14}  {:>10}  {:>16}  {:>16}  {:>10}\n", "L", "params_ed", "params_dec",
             "ratio", "flops_ed", "flops_dec", "ratio");
  for (Count layers : {2, 6, 12}) {
    LmConfig ed;
    ed.arrangement = LmArrangement::kEncoderDecoder;
    ed.layers_per_stack = layers;
    LmConfig dec = ed;
    dec.arrangement = LmArrangement::kDecoderOnly;
    const ArchSpec a = build_lm(ed);
    const ArchSpec b = build_lm(dec);
    const auto pa = count_params(a).total, pb = count_params(b).total;
    const auto fa = count_flops(a, 1).flops, fb = count_flops(b, 1).flops;
    fmt::print("{:>3}  {:>14}  {:>14}  {:>10.6f}  {:>16}  {:>16}  {:>10.6f}\n", layers, pa, pb,
               static_cast<double>(pa) / static_cast<double>(pb), fa, fb,
               static_cast<double>(fa) / static_cast<double>(fb));
  }
}
