#pragma once

#include "dpace/common.hpp"

namespace dpace {

struct RadioConfig {
    double carrier_hz = 5.805e9;
    double bandwidth_hz = 80e6;
    int n_subcarriers = 256;
    int n_antennas = 2;  // antenna 0 is the reference channel
    double packet_rate_hz = 600.0;
    double c_mps = 3e8;

    double dt_s() const { return 1.0 / packet_rate_hz; }

    // Centered uniform subcarrier map over the band.
    double subcarrier_hz(int k) const {
        return carrier_hz + (k - n_subcarriers / 2) * bandwidth_hz / n_subcarriers;
    }

    void validate() const {
        if (n_antennas < 2) throw DataError("radio: n_antennas must be >= 2 (antenna 0 is the reference)");
        if (n_subcarriers < 1) throw DataError("radio: n_subcarriers must be >= 1");
        if (packet_rate_hz <= 0.0) throw DataError("radio: packet_rate_hz must be > 0");
        if (carrier_hz <= 0.0 || bandwidth_hz < 0.0) throw DataError("radio: invalid band");
        if (c_mps <= 0.0) throw DataError("radio: invalid propagation speed");
    }
};

}  // namespace dpace
