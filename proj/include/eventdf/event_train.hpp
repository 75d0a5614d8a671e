#ifndef EVENTDF_EVENT_TRAIN_HPP
#define EVENTDF_EVENT_TRAIN_HPP

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace eventdf {

/// A sorted sequence of event times realized as fixed-width square
/// presynaptic pulses.
struct EventTrain {
  std::vector<double> times;      // ms, strictly increasing
  double pulse_width = 3.5;       // ms
  double pulse_amplitude = 40.0;  // mV during a pulse
  double baseline = -65.0;        // mV between pulses

  static EventTrain periodic(double t0, double period, int count) {
    EventTrain train;
    train.times.reserve(count);
    for (int i = 0; i < count; ++i) train.times.push_back(t0 + i * period);
    return train;
  }

  void validate() const {
    if (pulse_width <= 0.0) throw std::invalid_argument("pulse_width must be positive");
    for (std::size_t i = 1; i < times.size(); ++i) {
      if (times[i] - times[i - 1] <= pulse_width)
        throw std::invalid_argument("event gaps must exceed pulse_width");
    }
  }
};

/// Presynaptic voltage at time t: pulse_amplitude on [t_i, t_i + width),
/// baseline otherwise.
inline double presynaptic_waveform(const EventTrain& train, double t) {
  auto it = std::upper_bound(train.times.begin(), train.times.end(), t);
  if (it == train.times.begin()) return train.baseline;
  double onset = *(it - 1);
  return (t - onset < train.pulse_width) ? train.pulse_amplitude : train.baseline;
}

}  // namespace eventdf

#endif
