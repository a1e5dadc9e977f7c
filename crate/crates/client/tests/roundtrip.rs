use softsnake_client::{Client, Error};
use softsnake_core::evaluation::{classify, RangeThresholds, RobotMetrics};
use softsnake_core::optimizer::{design_pipeline, DesignInputs};
use softsnake_core::snake::snake_report;
use softsnake_core::teleop::{Mode, TeleopInput};
use softsnake_core::wire::{EvaluateRequest, ServerMessage, SnakeRequest, WorkspaceRequest};
use softsnake_service::{start, ServiceOptions};

async fn client() -> Client {
    let running = start("127.0.0.1:0".parse().unwrap(), ServiceOptions::default(), None)
        .await
        .unwrap();
    Client::new(&format!("http://{}", running.addr)).unwrap()
}

#[tokio::test]
async fn remote_results_match_local() {
    let c = client().await;

    let inputs = DesignInputs {
        pinned_fringes: Some(5),
        ..DesignInputs::default()
    };
    assert_eq!(c.design(&inputs).await.unwrap(), design_pipeline(&inputs).unwrap());

    let angles = vec![0.3, -0.2, 0.5, 0.1];
    let req = SnakeRequest {
        joint_angles: angles.clone(),
        link_lengths: vec![0.1; 4],
    };
    assert_eq!(c.snake(&req).await.unwrap(), snake_report(&angles, &[0.1; 4]).unwrap());

    let req = EvaluateRequest {
        metrics: RobotMetrics::prototype(),
        thresholds: RangeThresholds::default(),
    };
    assert_eq!(
        c.evaluate(&req).await.unwrap(),
        classify(&req.metrics, &req.thresholds).unwrap()
    );

    let ws = c
        .workspace(&WorkspaceRequest {
            steps: 3,
            ..WorkspaceRequest::default()
        })
        .await
        .unwrap();
    assert_eq!(ws.summary.count, 81);
    assert!(ws.points.is_none());
}

#[tokio::test]
async fn validation_errors_are_typed() {
    let c = client().await;
    let err = c
        .design(&DesignInputs {
            max_fringes: 0,
            ..DesignInputs::default()
        })
        .await
        .unwrap_err();
    assert!(err.is_validation(), "{err}");
    assert!(matches!(err, Error::Api { status: 422, .. }));
}

#[tokio::test]
async fn teleop_session_streams_state() {
    let c = client().await;
    assert_eq!(c.config().await.unwrap().tick_rate, 50.0);
    let mut s = c.teleop().await.unwrap();
    s.send_input(&TeleopInput {
        joystick_x: 1.0,
        mode: Mode::Ssr,
        ..TeleopInput::default()
    })
    .await
    .unwrap();
    let mut last = None;
    for _ in 0..30 {
        match s.next_message().await.unwrap().unwrap() {
            ServerMessage::State(f) => last = Some(f),
            ServerMessage::Error { message, .. } => panic!("{message}"),
        }
    }
    let f = last.unwrap();
    assert_eq!(f.mode, Mode::Ssr);
    assert!(f.module_bends[0] > 0.0);
    s.reset().await.unwrap();
    s.close().await.unwrap();
    assert_eq!(c.state().await.unwrap().module_bends.len(), 4);
}

#[test]
fn rejects_non_http_urls() {
    assert!(matches!(Client::new("ftp://x"), Err(Error::Url(_))));
    assert!(matches!(Client::new("not a url"), Err(Error::Url(_))));
}
