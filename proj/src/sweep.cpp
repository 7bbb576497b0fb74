#include "sweep.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <set>
#include <stdexcept>
#include <tuple>

namespace hammersley::detail {
namespace {

struct Carrier {
  int velocity = 0;
  double key = 0.0;  // v for +1, u for -1
  LightCone start;
  int label = -1;    // superior label, -1 for regular
  bool alive = true;
  std::uint32_t version = 0;
};

enum EventKind : int { collision = 1, exit_event = 2, watch_event = 3 };

struct Event {
  LightCone at;
  double t = 0.0;
  double x = 0.0;
  int kind = 0;
  int a = -1;
  int b = -1;
  std::uint32_t va = 0;
  std::uint32_t vb = 0;
};

struct Later {
  bool operator()(const Event& l, const Event& r) const {
    return std::tie(l.t, l.x, l.kind, l.a, l.b) > std::tie(r.t, r.x, r.kind, r.a, r.b);
  }
};

class Engine {
 public:
  Engine(const Domain& d, int superior_count, const SweepOptions& opt)
      : domain_(d), opt_(opt), order_(ByPos{this}) {
    out_.superiors.resize(2 * static_cast<std::size_t>(superior_count));
    for (int i = 0; i < superior_count; ++i) {
      for (int type : {+1, -1}) {
        auto& tr = out_.superiors[label_of(i, type)];
        tr.index = i;
        tr.type = type;
      }
    }
  }

  SweepOutput run(std::vector<SweepSource> sources, std::span<const double> snap_at = {},
                  std::vector<Snapshot>* snaps = nullptr) {
    if (opt_.initial) seed(*opt_.initial);
    std::size_t next_snap = 0;
    std::sort(sources.begin(), sources.end(), [](const SweepSource& a, const SweepSource& b) {
      return std::pair(a.at.t(), a.at.x()) < std::pair(b.at.t(), b.at.x());
    });
    std::size_t next = 0;
    while (next < sources.size() || !queue_.empty()) {
      bool take_birth = next < sources.size();
      if (take_birth && !queue_.empty()) {
        const auto& e = queue_.top();
        const double bt = sources[next].at.t();
        take_birth = bt < e.t || (bt == e.t && sources[next].at.x() <= e.x);
      }
      if (snaps && next_snap < snap_at.size()) {
        const double t = take_birth ? sources[next].at.t() : queue_.top().t;
        while (next_snap < snap_at.size() && snap_at[next_snap] < t) snaps->push_back(snapshot(snap_at[next_snap++]));
      }
      if (take_birth) {
        birth(sources[next++]);
        continue;
      }
      const Event e = queue_.top();
      queue_.pop();
      if (!valid(e)) continue;
      now_ = e.t;
      if (e.kind == exit_event) {
        exit(e.a, e.at);
      } else if (e.kind == watch_event) {
        stop_ = true;
      } else {
        collide(e.a, e.b, e.at);
      }
      if (stop_) {
        finish_watch();
        break;
      }
    }
    if (snaps) {
      while (next_snap < snap_at.size()) snaps->push_back(snapshot(snap_at[next_snap++]));
    }
    return std::move(out_);
  }

 private:
  struct ByPos {
    const Engine* e;
    using is_transparent = void;
    bool operator()(int a, int b) const {
      const double pa = e->pos(a);
      const double pb = e->pos(b);
      const double tol = 1e-12 * std::max({1.0, std::abs(pa), std::abs(pb)});
      if (pa < pb - tol) return true;
      if (pb < pa - tol) return false;
      const int va = e->carriers_[a].velocity;
      const int vb = e->carriers_[b].velocity;
      if (va != vb) return va < vb;
      return a < b;
    }
    bool operator()(int a, double x) const { return e->pos(a) < x; }
    bool operator()(double x, int a) const { return x < e->pos(a); }
  };
  using Order = std::set<int, ByPos>;
  using It = Order::iterator;

  void seed(const Snapshot& s) {
    now_ = s.t;
    for (const auto& c : s.carriers) {
      carriers_.push_back({c.velocity, c.key, c.start, -1, true, 0});
      its_.emplace_back();
      const int id = static_cast<int>(carriers_.size()) - 1;
      its_[id] = order_.emplace_hint(order_.end(), id);
      schedule_exit(id);
    }
    for (auto it = order_.begin(); it != order_.end() && std::next(it) != order_.end(); ++it) {
      schedule_pair(it, std::next(it));
    }
  }

  Snapshot snapshot(double t) const {
    Snapshot s;
    s.t = t;
    for (int c : order_) {
      const auto& k = carriers_[c];
      s.carriers.push_back({k.velocity, k.key, k.start});
    }
    return s;
  }

  bool watched(int c) const {
    const int l = carriers_[c].label;
    return opt_.watch >= 0 && l >= 0 && index_of_label(l) == opt_.watch;
  }

  // Next time the watched particle on carrier c reaches x = 0.
  void schedule_watch(int c) {
    if (!watched(c)) return;
    const auto& k = carriers_[c];
    if (k.velocity == type_of_label(k.label)) return;  // moving away from the axis
    Event e;
    e.at = {k.key, k.key};
    e.t = k.key;
    e.x = 0.0;
    if (!(e.t > now_)) return;
    e.kind = watch_event;
    e.a = c;
    e.va = k.version;
    queue_.push(e);
  }

  void note_end(int label) {
    if (opt_.watch >= 0 && index_of_label(label) == opt_.watch) stop_ = true;
  }

  // Close the watched traces that are still running at the stop time.
  void finish_watch() {
    for (int c : order_) {
      if (!watched(c)) continue;
      const auto& k = carriers_[c];
      auto& tr = out_.superiors[k.label];
      const LightCone here = k.velocity > 0 ? LightCone{2.0 * now_ - k.key, k.key}
                                            : LightCone{k.key, 2.0 * now_ - k.key};
      // A corner reached at this very instant already ends the trace.
      if (tr.vertices.empty() || std::abs(tr.vertices.back().t() - now_) > 1e-12 * std::max(1.0, now_)) {
        tr.vertices.push_back(here);
      }
      tr.end = TraceEnd::truncated;
    }
  }

  double pos(int c) const {
    const auto& k = carriers_[c];
    return k.velocity > 0 ? now_ - k.key : k.key - now_;
  }

  bool valid(const Event& e) const {
    const auto& a = carriers_[e.a];
    if (!a.alive || a.version != e.va) return false;
    if (e.kind == collision) {
      const auto& b = carriers_[e.b];
      if (!b.alive || b.version != e.vb) return false;
    }
    return true;
  }

  int make(int velocity, const LightCone& at, int label) {
    Carrier c;
    c.velocity = velocity;
    c.key = velocity > 0 ? at.v : at.u;
    c.start = at;
    c.label = label;
    carriers_.push_back(c);
    its_.emplace_back();
    if (label >= 0) out_.superiors[label].vertices.push_back(at);
    return static_cast<int>(carriers_.size()) - 1;
  }

  void birth(const SweepSource& s) {
    now_ = s.at.t();
    auto hint = order_.lower_bound(s.at.x());
    if (s.velocity != 0) {
      const int c = make(s.velocity, s.at, -1);
      its_[c] = order_.emplace_hint(hint, c);
      schedule_exit(c);
      schedule_around(its_[c]);
      return;
    }
    const int lm = s.superior >= 0 ? label_of(s.superior, -1) : -1;
    const int lp = s.superior >= 0 ? label_of(s.superior, +1) : -1;
    const int m = make(-1, s.at, lm);
    const int p = make(+1, s.at, lp);
    its_[m] = order_.emplace_hint(hint, m);
    its_[p] = order_.emplace_hint(std::next(its_[m]), p);
    if (std::next(its_[m]) != its_[p]) throw std::logic_error("sweep: pair insertion out of order");
    schedule_exit(m);
    schedule_exit(p);
    schedule_watch(m);
    schedule_watch(p);
    if (its_[m] != order_.begin()) schedule_pair(std::prev(its_[m]), its_[m]);
    if (std::next(its_[p]) != order_.end()) schedule_pair(its_[p], std::next(its_[p]));
  }

  void schedule_around(It it) {
    if (it != order_.begin()) schedule_pair(std::prev(it), it);
    if (std::next(it) != order_.end()) schedule_pair(it, std::next(it));
  }

  void schedule_pair(It lo, It hi) {
    const int a = *lo;
    const int b = *hi;
    const auto& ca = carriers_[a];
    const auto& cb = carriers_[b];
    if (ca.velocity <= 0 || cb.velocity >= 0) return;
    Event e;
    e.at = {cb.key, ca.key};
    e.t = e.at.t();
    e.x = e.at.x();
    e.kind = collision;
    e.a = a;
    e.b = b;
    e.va = ca.version;
    e.vb = cb.version;
    queue_.push(e);
  }

  void schedule_exit(int c) {
    const auto& k = carriers_[c];
    Event e;
    e.at = k.velocity > 0 ? domain_.exit_plus(k.key) : domain_.exit_minus(k.key);
    e.t = e.at.t();
    e.x = e.at.x();
    e.kind = exit_event;
    e.a = c;
    e.va = k.version;
    queue_.push(e);
  }

  void close_regular(int c, const LightCone& at) {
    if (!opt_.record_regular) return;
    const auto& k = carriers_[c];
    if (k.start == at) return;
    out_.regular.push_back(Segment{k.start, at, k.velocity, 0});
  }

  void remove(int c) {
    carriers_[c].alive = false;
    order_.erase(its_[c]);
  }

  // Removes both carriers (adjacent, a below b) and links their neighbours.
  void remove_pair(int a, int b) {
    It lo = its_[a];
    It hi = std::next(its_[b]);
    const bool has_lo = lo != order_.begin();
    It below = has_lo ? std::prev(lo) : order_.end();
    remove(a);
    remove(b);
    if (has_lo && hi != order_.end()) schedule_pair(below, hi);
  }

  void exit(int c, const LightCone& at) {
    auto& k = carriers_[c];
    if (k.label >= 0) {
      auto& tr = out_.superiors[k.label];
      tr.vertices.push_back(at);
      tr.end = TraceEnd::exited;
      note_end(k.label);
    } else {
      close_regular(c, at);
    }
    It it = its_[c];
    const bool has_lo = it != order_.begin();
    It below = has_lo ? std::prev(it) : order_.end();
    It above = std::next(it);
    remove(c);
    if (has_lo && above != order_.end()) schedule_pair(below, above);
  }

  void redirect(int c, int velocity, double key) {
    auto& k = carriers_[c];
    k.velocity = velocity;
    k.key = key;
    ++k.version;
    schedule_exit(c);
    schedule_watch(c);
  }

  void collide(int a, int b, const LightCone& at) {
    auto& ca = carriers_[a];
    auto& cb = carriers_[b];
    const bool sa = ca.label >= 0;
    const bool sb = cb.label >= 0;
    if (!sa && !sb) {
      close_regular(a, at);
      close_regular(b, at);
      remove_pair(a, b);
      return;
    }
    if (sa && !sb) {
      // The regular particle is absorbed; the superior one turns down.
      close_regular(b, at);
      out_.superiors[ca.label].vertices.push_back(at);
      out_.encounters.push_back({at, ca.label, -1, false});
      remove(b);
      redirect(a, -1, at.u);
      schedule_around(its_[a]);
      return;
    }
    if (!sa && sb) {
      close_regular(a, at);
      out_.superiors[cb.label].vertices.push_back(at);
      out_.encounters.push_back({at, -1, cb.label, false});
      remove(a);
      redirect(b, +1, at.v);
      schedule_around(its_[b]);
      return;
    }
    const int la = ca.label;
    const int lb = cb.label;
    out_.superiors[la].vertices.push_back(at);
    out_.superiors[lb].vertices.push_back(at);
    if (type_of_label(la) != type_of_label(lb)) {
      out_.encounters.push_back({at, la, lb, true});
      auto& ta = out_.superiors[la];
      auto& tb = out_.superiors[lb];
      ta.end = tb.end = TraceEnd::annihilated;
      ta.partner = lb;
      tb.partner = la;
      note_end(la);
      note_end(lb);
      remove_pair(a, b);
      return;
    }
    // Same type: the carriers bounce. The younger label continues with the
    // velocity opposite to its type, the older one with its own type.
    out_.encounters.push_back({at, la, lb, false});
    const int type = type_of_label(la);
    const int younger = index_of_label(la) < index_of_label(lb) ? la : lb;
    const int older = younger == la ? lb : la;
    // After the bounce carrier a moves with -1 and carrier b with +1.
    ca.label = type > 0 ? younger : older;
    cb.label = type > 0 ? older : younger;
    redirect(a, -1, at.u);
    redirect(b, +1, at.v);
    // Both now sit at the same position; re-seat them in the order.
    order_.erase(its_[a]);
    order_.erase(its_[b]);
    its_[a] = order_.insert(a).first;
    its_[b] = order_.insert(b).first;
    if (std::next(its_[a]) != its_[b]) throw std::logic_error("sweep: bounce out of order");
    if (its_[a] != order_.begin()) schedule_pair(std::prev(its_[a]), its_[a]);
    if (std::next(its_[b]) != order_.end()) schedule_pair(its_[b], std::next(its_[b]));
  }

  const Domain& domain_;
  SweepOptions opt_;
  bool stop_ = false;
  double now_ = 0.0;
  std::vector<Carrier> carriers_;
  std::vector<It> its_;
  Order order_;
  std::priority_queue<Event, std::vector<Event>, Later> queue_;
  SweepOutput out_;
};

}  // namespace

SweepOutput run_sweep(const Domain& domain, std::vector<SweepSource> sources, int superior_count,
                      const SweepOptions& options) {
  Engine engine(domain, superior_count, options);
  return engine.run(std::move(sources));
}

std::vector<Snapshot> regular_snapshots(const Domain& domain, std::vector<SweepSource> sources,
                                        std::span<const double> at) {
  SweepOptions opt;
  opt.record_regular = false;
  Engine engine(domain, 0, opt);
  std::vector<Snapshot> snaps;
  engine.run(std::move(sources), at, &snaps);
  return snaps;
}

std::vector<SweepSource> sources_from(const PlanarConfig& config,
                                      std::span<const BirthEvent> births) {
  std::vector<SweepSource> out;
  out.reserve(config.size() + births.size());
  for (const auto& p : config.points()) out.push_back({LightCone::of(p), 0, -1});
  for (const auto& b : births) {
    if (b.velocity == 0) {
      out.push_back({b.key_point, 0, -1});
    } else {
      out.push_back({b.key_point, b.velocity, -1});
    }
  }
  return out;
}

}  // namespace hammersley::detail
