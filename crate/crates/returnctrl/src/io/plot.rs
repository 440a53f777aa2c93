//! Gnuplot scripts next to the data they read. Run them from the output
//! directory: `gnuplot support.gp` writes `support.png`.

fn preamble(png: &str, title: &str) -> String {
    format!(
        "set terminal pngcairo size 900,650\n\
         set output '{png}'\n\
         set title \"{title}\"\n\
         set key top right\n"
    )
}

/// Level set `{(t, r) : k(t, r) > 0}` in reference coordinates. The data
/// columns are `t r sign(k)`, with `sign = 0` off the support.
pub fn support_script(data: &str, complex: bool) -> String {
    let what = if complex { "Re k" } else { "k" };
    format!(
        "{}set xlabel 't (reference)'\n\
         set ylabel 'r (reference)'\n\
         set view map\n\
         set palette defined (-1 '#3b4cc0', 0 '#f7f7f7', 1 '#b40426')\n\
         set cbrange [-1:1]\n\
         set cblabel 'sign of {what}'\n\
         unset key\n\
         splot '{data}' using 1:2:3 with pm3d\n",
        preamble("support.png", &format!("{{(t,r): {what}(t,r) > 0}}"))
    )
}

/// Terminal and weighted norms against the penalty, log-log.
pub fn sweep_script(data: &str) -> String {
    format!(
        "{}set datafile separator ','\n\
         set logscale xy\n\
         set format x '10^{{%L}}'\n\
         set format y '10^{{%L}}'\n\
         set xlabel 'penalty epsilon'\n\
         set ylabel 'norm'\n\
         plot '{data}' using 1:2 skip 1 with linespoints title 'terminal', \\\n\
         \x20    '{data}' using 1:3 skip 1 with linespoints title 'weighted control', \\\n\
         \x20    '{data}' using 1:4 skip 1 with linespoints title 'sup control'\n",
        preamble("sweep.png", "penalized control sweep")
    )
}

/// Picard update and terminal norms per iteration.
pub fn history_script(data: &str) -> String {
    format!(
        "{}set datafile separator ','\n\
         set logscale y\n\
         set xlabel 'iteration'\n\
         set ylabel 'norm'\n\
         plot '{data}' using 1:2 skip 1 with linespoints title 'update', \\\n\
         \x20    '{data}' using 1:4 skip 1 with linespoints title 'terminal'\n",
        preamble("history.png", "Picard iteration")
    )
}

/// Node-wise `v(T) − v*(T)` per random control.
pub fn obstruction_script(data: &str) -> String {
    format!(
        "{}set datafile separator ','\n\
         set xlabel 'control'\n\
         set ylabel 'min over nodes of v(T) - v*(T)'\n\
         plot '{data}' using 1:2 skip 1 with impulses lw 2 title 'gap', 0 with lines dt 2 notitle\n",
        preamble("obstruction.png", "quadratic coupling obstruction")
    )
}

/// Sorted observability ratios.
pub fn ratios_script(data: &str) -> String {
    format!(
        "{}set datafile separator ','\n\
         set logscale y\n\
         set xlabel 'sample'\n\
         set ylabel 'ratio'\n\
         plot '{data}' using 1:2 skip 1 with points pt 7 title 'observability ratio'\n",
        preamble("ratios.png", "empirical observability ratios")
    )
}
