/** Canvas rendering of the scene view model. */

import type { SceneViewModel } from "./viewmodel.js";

export interface Camera {
  scale: number; // pixels per meter
  offsetX: number;
  offsetY: number;
}

const TASK_RADIUS = 9;
const AGENT_RADIUS = 11;

/** Fit the scenario's extent into the canvas, preserving aspect ratio. */
export function fitCamera(
  vm: SceneViewModel,
  width: number,
  height: number,
  pad = 40,
): Camera {
  const xs = [vm.human.x, vm.robot.x, ...vm.tasks.map((t) => t.x)];
  const ys = [vm.human.y, vm.robot.y, ...vm.tasks.map((t) => t.y)];
  const minX = Math.min(...xs);
  const maxX = Math.max(...xs);
  const minY = Math.min(...ys);
  const maxY = Math.max(...ys);
  const spanX = Math.max(maxX - minX, 1e-6);
  const spanY = Math.max(maxY - minY, 1e-6);
  const scale = Math.min((width - 2 * pad) / spanX, (height - 2 * pad) / spanY);
  return {
    scale,
    offsetX: pad - minX * scale + (width - 2 * pad - spanX * scale) / 2,
    offsetY: pad - minY * scale + (height - 2 * pad - spanY * scale) / 2,
  };
}

export function toCanvas(cam: Camera, x: number, y: number): [number, number] {
  return [cam.offsetX + x * cam.scale, cam.offsetY + y * cam.scale];
}

export function toWorld(cam: Camera, px: number, py: number): [number, number] {
  return [(px - cam.offsetX) / cam.scale, (py - cam.offsetY) / cam.scale];
}

export function drawScene(
  ctx: CanvasRenderingContext2D,
  vm: SceneViewModel,
  cam: Camera,
): void {
  const { width, height } = ctx.canvas;
  ctx.clearRect(0, 0, width, height);

  // dashed candidate paths, fanning out from the agents' side
  ctx.save();
  ctx.strokeStyle = "#b9c2cc";
  ctx.setLineDash([5, 4]);
  ctx.lineWidth = 1;
  for (const path of vm.candidatePaths) {
    if (path.length === 0) {
      continue;
    }
    ctx.beginPath();
    const first = path[0]!;
    ctx.moveTo(...toCanvas(cam, first.x, first.y));
    for (const p of path.slice(1)) {
      ctx.lineTo(...toCanvas(cam, p.x, p.y));
    }
    ctx.stroke();
  }
  ctx.restore();

  // chosen first step: solid arrow from the acting agent
  if (vm.chosenArrow) {
    const a = vm.chosenArrow;
    const [fx, fy] = toCanvas(cam, a.fromX, a.fromY);
    const [tx, ty] = toCanvas(cam, a.toX, a.toY);
    ctx.save();
    ctx.strokeStyle = a.agent === "human" ? "#1f77b4" : "#2ca02c";
    ctx.fillStyle = ctx.strokeStyle;
    ctx.lineWidth = 2.5;
    ctx.beginPath();
    ctx.moveTo(fx, fy);
    ctx.lineTo(tx, ty);
    ctx.stroke();
    const angle = Math.atan2(ty - fy, tx - fx);
    ctx.beginPath();
    ctx.moveTo(tx, ty);
    ctx.lineTo(tx - 10 * Math.cos(angle - 0.4), ty - 10 * Math.sin(angle - 0.4));
    ctx.lineTo(tx - 10 * Math.cos(angle + 0.4), ty - 10 * Math.sin(angle + 0.4));
    ctx.closePath();
    ctx.fill();
    ctx.restore();
  }

  // tasks: red = unsafe for the human, grey cross = removed
  for (const t of vm.tasks) {
    const [x, y] = toCanvas(cam, t.x, t.y);
    ctx.save();
    if (t.removed) {
      ctx.strokeStyle = "#9aa0a6";
      ctx.lineWidth = 2;
      ctx.beginPath();
      ctx.moveTo(x - 6, y - 6);
      ctx.lineTo(x + 6, y + 6);
      ctx.moveTo(x + 6, y - 6);
      ctx.lineTo(x - 6, y + 6);
      ctx.stroke();
    } else {
      ctx.beginPath();
      ctx.arc(x, y, TASK_RADIUS, 0, 2 * Math.PI);
      ctx.fillStyle = t.unsafe ? "#d62728" : "#ffffff";
      ctx.strokeStyle = t.unsafe ? "#d62728" : "#333333";
      ctx.lineWidth = 2;
      ctx.fill();
      ctx.stroke();
    }
    ctx.fillStyle = "#333";
    ctx.font = "12px sans-serif";
    ctx.fillText(String(t.id), x + 11, y - 8);
    ctx.restore();
  }

  // agents
  const [hx, hy] = toCanvas(cam, vm.human.x, vm.human.y);
  ctx.save();
  ctx.beginPath();
  ctx.arc(hx, hy, AGENT_RADIUS, 0, 2 * Math.PI);
  ctx.fillStyle = "#1f77b4";
  ctx.fill();
  ctx.fillStyle = "#fff";
  ctx.font = "bold 11px sans-serif";
  ctx.textAlign = "center";
  ctx.textBaseline = "middle";
  ctx.fillText("H", hx, hy);
  ctx.restore();

  const [rx, ry] = toCanvas(cam, vm.robot.x, vm.robot.y);
  ctx.save();
  ctx.fillStyle = "#2ca02c";
  ctx.fillRect(rx - AGENT_RADIUS, ry - AGENT_RADIUS, 2 * AGENT_RADIUS, 2 * AGENT_RADIUS);
  ctx.fillStyle = "#fff";
  ctx.font = "bold 11px sans-serif";
  ctx.textAlign = "center";
  ctx.textBaseline = "middle";
  ctx.fillText("R", rx, ry);
  ctx.restore();

  // fixed scale bar: 0.1 m
  const bar = 0.1 * cam.scale;
  ctx.save();
  ctx.strokeStyle = "#333";
  ctx.lineWidth = 2;
  ctx.beginPath();
  ctx.moveTo(16, height - 16);
  ctx.lineTo(16 + bar, height - 16);
  ctx.stroke();
  ctx.font = "11px sans-serif";
  ctx.fillStyle = "#333";
  ctx.fillText("0.1 m", 16, height - 22);
  ctx.restore();
}

/** True when the canvas point grabs the human marker. */
export function hitsHuman(
  vm: SceneViewModel,
  cam: Camera,
  px: number,
  py: number,
): boolean {
  const [hx, hy] = toCanvas(cam, vm.human.x, vm.human.y);
  return Math.hypot(px - hx, py - hy) <= AGENT_RADIUS + 6;
}
